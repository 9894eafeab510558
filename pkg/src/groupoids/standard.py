"""Named constructions of finite groupoids."""

from typing import Any

from src.errors import BadParams
from src.groupoids.bibundles import GroupoidAction, action_groupoid
from src.groupoids.categories import FinGroupoid, cech_groupoid, pair_groupoid, trivial_groupoid

STANDARD_KINDS = ('cech', 'pair', 'trivial', 'action')


def standard_groupoid(kind: str, *args: Any, **kwargs: Any) -> FinGroupoid:
    """
    Build a standard groupoid by name.

    Args:
        kind: One of 'cech' (points, images), 'pair' (points),
            'trivial' (points) or 'action' (a GroupoidAction)

    Returns:
        FinGroupoid

    Raises:
        BadParams: unknown kind or wrong arguments
    """
    builders = {
        'cech': cech_groupoid,
        'pair': pair_groupoid,
        'trivial': trivial_groupoid,
        'action': action_groupoid,
    }
    if kind not in builders:
        raise BadParams(f"unknown groupoid kind {kind!r}; expected one of {', '.join(STANDARD_KINDS)}")
    if kind == 'action' and not (args and isinstance(args[0], GroupoidAction)):
        raise BadParams("an action groupoid needs a GroupoidAction")
    try:
        return builders[kind](*args, **kwargs)
    except TypeError as exc:
        raise BadParams(f"bad arguments for {kind} groupoid: {exc}") from exc
