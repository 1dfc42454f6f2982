"""Input validation shared by the estimators and samplers."""

import numbers

import numpy as np
from sklearn.utils import check_array


def check_sample(X, *, name="X", allow_empty=False):
    """Return ``X`` as a 1-d float array of finite, nonnegative values."""
    arr = check_array(
        np.asarray(X, dtype=float).reshape(-1),
        ensure_2d=False,
        ensure_min_samples=0 if allow_empty else 1,
        input_name=name,
    )
    if np.any(arr < 0):
        raise ValueError(f"{name} must be nonnegative")
    return arr


def check_positive_int(value, name, *, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_positive(value, name, *, allow_zero=False):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number")
    value = float(value)
    if not np.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise ValueError(f"{name} must be finite and {bound}, got {value}")
    return value


def descending_order(values, index=None):
    """Indices that sort ``values`` descending, ties broken by index ascending."""
    values = np.asarray(values)
    if index is None:
        index = np.arange(values.size)
    return np.lexsort((np.asarray(index), -values.astype(float)))
