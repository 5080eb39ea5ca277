"""Tracing and timing decorators for dispatch and heavy computations."""
import logging
import time
import traceback
from functools import wraps
from typing import Any, Callable, TypeVar, cast

from src.errors import QBorelError

logger = logging.getLogger(__name__)

F = TypeVar('F', bound=Callable[..., Any])


def summarize(value: Any) -> str:
    """Short description of an argument for trace records.

    Ideals and complexes can have thousands of generators, so only their
    size is reported.
    """
    generators = getattr(value, "generators", None)
    if isinstance(generators, tuple):
        return f"{type(value).__name__}[{len(generators)} generators]"
    ranks = getattr(value, "ranks", None)
    if callable(ranks) and hasattr(value, "differentials"):
        return f"{type(value).__name__}{ranks()}"
    name = getattr(value, "name", None)
    args = getattr(value, "args", None)
    if isinstance(name, str) and isinstance(args, tuple):
        return " ".join((name,) + tuple(str(a) for a in args))
    text = repr(value)
    return text if len(text) <= 80 else text[:77] + "..."


def debug_trace(func: F) -> F:
    """Trace calls at DEBUG with summarized arguments.

    Mathematical failures (QBorelError) are logged at DEBUG and re-raised
    for the caller to report; anything else is logged at ERROR with its
    traceback.

    Args:
        func: Function to trace

    Returns:
        Wrapped function with tracing
    """
    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        func_name = func.__qualname__
        logger.debug(
            f"Entering {func_name}",
            extra={
                'call_args': [summarize(a) for a in args[1:]]
                if args and hasattr(args[0], func.__name__)
                else [summarize(a) for a in args],
                'call_kwargs': {k: summarize(v) for k, v in kwargs.items()},
            }
        )
        try:
            result = func(*args, **kwargs)
        except QBorelError as e:
            logger.debug(f"{func_name} rejected its input: {e}",
                         extra={'error_type': type(e).__name__})
            raise
        except Exception as e:
            logger.error(
                f"Unexpected error in {func_name}",
                extra={
                    'error': str(e),
                    'traceback': traceback.format_exc()
                }
            )
            raise
        logger.debug(f"Exiting {func_name}",
                     extra={'result': summarize(result)})
        return result
    return cast(F, wrapper)


def measure_time(func: F) -> F:
    """Log the wall-clock duration of each call at DEBUG.

    Args:
        func: Function to measure

    Returns:
        Wrapped function with timing
    """
    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        start = time.perf_counter()
        try:
            return func(*args, **kwargs)
        finally:
            elapsed = time.perf_counter() - start
            logger.debug(
                f"{func.__name__} took {elapsed:.4f}s",
                extra={'duration_seconds': elapsed,
                       'function': func.__qualname__}
            )
    return cast(F, wrapper)
