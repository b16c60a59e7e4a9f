"""
Thread pool helper with order-preserving results
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """Apply func to every item; results come back in input order whatever the worker count"""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug(f"Mapping {len(items)} items over {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        # executor.map yields in submission order, which keeps merges deterministic
        return list(executor.map(func, items))
