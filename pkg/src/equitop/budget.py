"""Work budgets and the deterministic parallel-map helper.

Every potentially explosive search charges work units against a Budget.
Exhaustion raises BudgetExceeded instead of silently truncating; callers
turn that into an interval result or an Unknown verdict, never into a
wrong exact value.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from .errors import BudgetExceeded, SizeBudgetExceeded

DEFAULT_WORK_UNITS = 50_000_000
DEFAULT_SD_ELEMENT_CAP = 20_000


class Budget:
    """Mutable counter of search work, shared across one computation."""

    __slots__ = ("limit", "used", "sd_cap")

    def __init__(self, limit=DEFAULT_WORK_UNITS, sd_cap=DEFAULT_SD_ELEMENT_CAP):
        self.limit = limit
        self.used = 0
        self.sd_cap = sd_cap

    def charge(self, amount=1):
        self.used += amount
        if self.used > self.limit:
            raise BudgetExceeded(
                f"work budget exhausted ({self.used} > {self.limit} units)"
            )

    def check_size(self, size, what="construction"):
        if size > self.sd_cap:
            raise SizeBudgetExceeded(
                f"{what} would have {size} elements, over the cap of {self.sd_cap}"
            )

    def remaining(self):
        return max(self.limit - self.used, 0)

    def snapshot(self):
        return {"limit": self.limit, "used": self.used, "sd_cap": self.sd_cap}


def ensure_budget(budget):
    return budget if budget is not None else Budget()


def pmap(fn, items, threads=1):
    """Map fn over items, optionally on a thread pool.

    Results always come back in input order, so callers stay deterministic
    no matter how many workers run.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
