from .perm import (
    CLOSURE_BUDGET,
    Perm,
    PermGroup,
    blocks_of,
    close_generators,
    direct_product,
    preserves_blocks,
    standard_group,
    trivial_group,
    wreath_element,
    wreath_product,
)
from .action import (
    GroupAction,
    RepTable,
    action_to_rep,
    check_action,
    check_rep,
    group_as_category,
    natural_action,
    orbits_stabilizers,
    rep_to_action,
)
from .internal import InternalGroupoidData, category_to_internal, check_internal_groupoid
