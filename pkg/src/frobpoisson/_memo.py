import functools
import weakref


def per_object(fn):
    """Memoize ``fn(obj, *args)`` per live ``obj`` (held weakly)."""
    store: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()

    @functools.wraps(fn)
    def wrapper(obj, *args):
        cache = store.get(obj)
        if cache is None:
            cache = store[obj] = {}
        try:
            return cache[args]
        except KeyError:
            val = cache[args] = fn(obj, *args)
            return val

    return wrapper
