"""
Runtime configuration.

Values come from the environment (optionally a .env file next to the
working directory). Nothing is required: every setting has a default.
"""

import os

from dotenv import load_dotenv

load_dotenv()


def _int_setting(name, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


# Largest tuple enumeration (X^N, atoms, permutation averages) we materialize
ENUMERATION_CAP = _int_setting('PREVISION_ENUMERATION_CAP', 10 ** 6)

# Largest number of active sets the exact vertex enumerator will try
VERTEX_CAP = _int_setting('PREVISION_VERTEX_CAP', 200000)

DECIMAL_DIGITS = _int_setting('PREVISION_DECIMAL_DIGITS', 20)

TC_COMBINATIONS = _int_setting('PREVISION_TC_COMBINATIONS', 8)
TC_SEED = _int_setting('PREVISION_TC_SEED', 0)

LOG_LEVEL = os.getenv('PREVISION_LOG_LEVEL', 'WARNING').upper()


def enumeration_cap(cap=None):
    """Return `cap` if given, the configured enumeration cap otherwise"""
    return ENUMERATION_CAP if cap is None else cap


def vertex_cap(cap=None):
    return VERTEX_CAP if cap is None else cap
