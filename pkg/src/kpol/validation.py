"""Input checks shared by the estimators and the command line."""

from sklearn.utils.validation import check_is_fitted

from kpol.exceptions import ParseError
from kpol.instance import KPolInstance, from_dict, loads


def check_instance(obj):
    """Coerce an instance, its dict form or its JSON text to a KPolInstance."""
    if isinstance(obj, KPolInstance):
        return obj
    if isinstance(obj, dict):
        return from_dict(obj)
    if isinstance(obj, str):
        return loads(obj)
    raise ParseError(f"cannot read an instance from {type(obj).__name__}")


def check_instances(X):
    """A single instance or an iterable of them, as a list of KPolInstance."""
    if isinstance(X, (KPolInstance, dict, str)):
        return [check_instance(X)]
    try:
        items = list(X)
    except TypeError as exc:
        raise ParseError(f"expected instances, got {type(X).__name__}") from exc
    return [check_instance(x) for x in items]


__all__ = ["check_instance", "check_instances", "check_is_fitted"]
