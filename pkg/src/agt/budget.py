import os

from .errors import BudgetExceeded, ConfigError

DEFAULT_BUDGET = 5_000_000


def default_budget():
    """Element cap from ``AGT_BUDGET``, falling back to 5 million."""
    raw = os.environ.get("AGT_BUDGET")
    if raw is None or raw == "":
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"AGT_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ConfigError("AGT_BUDGET must be positive")
    return value


def check_budget(count, budget, what, module="agt"):
    if budget is None:
        budget = default_budget()
    if count > budget:
        raise BudgetExceeded(what, budget, module)
