"""Online column minima of offset Monge matrices and a boundary shortest-path
solver built on them."""

from .ddg import DdgMatrix, Region, WeightedDigraph, build_ddg, check_feasible, decompose_hole, grid_instance
from .heap import PairingHeap
from .monge import (
    FLIPPED,
    RECT,
    STAIRCASE,
    ColumnMinimum,
    MongeView,
    brute_column_minima,
    is_monge,
    offset_view,
    random_monge,
    smawk_bottommost_minima,
)
from .online_block import OnlineBlockStructure
from .online_rect import ContractError, OnlineRectStructure
from .online_staircase import OnlineStaircaseStructure, partition_staircase
from .sssp import SsspInstance, sssp_monge, sssp_naive, unreduce
from .subrow import SubrowOracle, build_oracle

__version__ = "0.1.0"
