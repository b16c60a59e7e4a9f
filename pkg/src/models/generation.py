"""
Generator parameters
"""
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class GenParams:
    """Seed plus size knobs shared by all generators"""
    seed: int = 0
    set_count: int = 8
    min_set_size: int = 1
    max_set_size: int = 3
    ground_size: int = 10
    block_count: int = 2
    min_block_size: int = 2
    max_block_size: int = 6
    factor_count: int = 3
    point_count: Optional[int] = None  # drawn from 1..max_points when unset
    max_points: int = 3
    box_count: int = 8
    max_support: int = 2
    catalog_id: Optional[int] = None  # drawn from the catalog when unset
    perturb: bool = False
