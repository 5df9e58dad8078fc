"""Tunables for the orbits app, read from ``settings.ORBITS`` when Django is configured."""

from pathlib import Path

DEFAULTS = {
    'TOL_EQ': 1e-8,
    'TOL_RANK': 1e-10,
    'TOL_GROUP': 1e-8,
    'TOL_ORTH': 1e-9,
    'MAX_SWEEPS': 100,
    'DEFAULT_GROUP': 'motion',
    'DEFAULT_SCHEME': 'gmean',
    'DIST_MATRIX_WORKERS': 4,
    'LOG_DIR': Path(__file__).resolve().parent.parent / 'logs',
    'CONSOLE_LOG_LEVEL': 'WARNING',
}


def get_setting(name: str):
    """Return ``settings.ORBITS[name]``, falling back to the built-in default."""
    if name not in DEFAULTS:
        raise KeyError(f"Unknown orbits setting: {name}")
    try:
        from django.conf import settings
        from django.core.exceptions import ImproperlyConfigured
    except ImportError:
        return DEFAULTS[name]
    try:
        overrides = getattr(settings, 'ORBITS', {})
    except ImproperlyConfigured:
        return DEFAULTS[name]
    return overrides.get(name, DEFAULTS[name])
