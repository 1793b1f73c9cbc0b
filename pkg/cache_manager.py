"""
PIB Solver Cache Manager
Memoises expensive numeric tables (embeddings at a given precision)
"""

import json
import hashlib
import threading
from typing import Any, Callable, Dict, Optional


class CacheManager:
    """In-process cache keyed by function name and arguments"""

    def __init__(self):
        self._store: Dict[str, Dict[str, Any]] = {}
        self._lock = threading.Lock()
        self.cache_stats = {
            'hits': 0,
            'misses': 0,
            'total_requests': 0
        }

    def _get_cache_key(self, func_name: str, *args, **kwargs) -> str:
        """Generate unique cache key from function name and parameters"""
        key_data = {
            'func': func_name,
            'args': str(args),
            'kwargs': str(sorted(kwargs.items()))
        }
        key_string = json.dumps(key_data, sort_keys=True)
        return hashlib.md5(key_string.encode()).hexdigest()

    def get(self, func_name: str, *args, **kwargs) -> Optional[Any]:
        """Cached value or None"""
        cache_key = self._get_cache_key(func_name, *args, **kwargs)
        with self._lock:
            self.cache_stats['total_requests'] += 1
            if cache_key in self._store:
                self.cache_stats['hits'] += 1
                return self._store[cache_key]['data']
            self.cache_stats['misses'] += 1
            return None

    def set(self, func_name: str, data: Any, *args, **kwargs) -> None:
        cache_key = self._get_cache_key(func_name, *args, **kwargs)
        with self._lock:
            self._store[cache_key] = {'data': data, 'func_name': func_name}

    def cached_call(self, func: Callable, *args, **kwargs) -> Any:
        """Execute function with caching"""
        func_name = func.__name__
        cached_result = self.get(func_name, *args, **kwargs)
        if cached_result is not None:
            return cached_result
        result = func(*args, **kwargs)
        self.set(func_name, result, *args, **kwargs)
        return result

    def get_stats(self) -> Dict[str, Any]:
        """Get cache performance statistics"""
        with self._lock:
            stats = self.cache_stats.copy()
            cache_info: Dict[str, int] = {}
            for value in self._store.values():
                cache_info[value['func_name']] = cache_info.get(value['func_name'], 0) + 1
        total = stats['total_requests']
        return {
            'hit_rate': (stats['hits'] / total) * 100 if total else 0.0,
            'total_requests': total,
            'cache_hits': stats['hits'],
            'cache_misses': stats['misses'],
            'cache_size': sum(cache_info.values()),
            'cached_functions': cache_info
        }


# Global cache manager instance
cache_manager = CacheManager()


def spec_fingerprint(spec) -> str:
    """Stable md5 of the mathematical content of a FieldSpec"""
    payload = {
        'm': spec.quad.m,
        'f': [c.as_list() for c in spec.f],
        'g': list(spec.g),
        'units': [[list(u.coords), u.denom] for u in spec.units],
        'D_K': spec.D_K,
    }
    return hashlib.md5(json.dumps(payload, sort_keys=True).encode()).hexdigest()
