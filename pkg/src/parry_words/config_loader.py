import os
import yaml
import logging
from pathlib import Path
from typing import Dict, Any

logger = logging.getLogger("parry-words")

# Paths
ROOT_DIR = Path(__file__).parent
CONFIG_DIR = ROOT_DIR / "config"

def _load_yaml(filename: str) -> Dict[str, Any]:
    """Helper to load a YAML file from the config directory."""
    path = CONFIG_DIR / filename
    if not path.exists():
        logger.warning(f"Config file not found: {path}. Returning empty dict.")
        return {}

    try:
        with open(path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f) or {}
    except Exception as e:
        logger.error(f"Error loading {filename}: {e}")
        return {}

def load_analysis_config() -> Dict[str, Any]:
    """Load analysis_config.yaml"""
    return _load_yaml("analysis_config.yaml")

# Load Analysis Configuration
_analysis_config = load_analysis_config()

def _get_config_value(key: str, config: Dict[str, Any], default: Any = None) -> Any:
    if key not in config:
        logger.warning(f"Config parameter '{key}' tried to be loaded but not present in analysis_config.yaml")
        return default
    return config[key]

def _section(key: str) -> Dict[str, Any]:
    return _get_config_value(key, _analysis_config, {}) or {}

_prefix = _section("prefix")
_renyi = _section("renyi")
_root = _section("root")
_mechanical = _section("mechanical")
_primitivity = _section("primitivity")
_verification = _section("verification")
_sweep = _section("sweep")

# Exported Configuration Variables
DEFAULT_PREFIX_MIN = int(_get_config_value("min_length", _prefix, 100_000))
DEFAULT_PREFIX_LADDER_INDEX = int(_get_config_value("u_ladder_index", _prefix, 6))
DEFAULT_PREFIX_LADDER_FACTOR = int(_get_config_value("u_ladder_factor", _prefix, 4))
DEFAULT_PREFIX_MAX = int(_get_config_value("max_length", _prefix, 10_000_000))
DEFAULT_N_MAX = int(_get_config_value("n_max", _analysis_config, 500))
WORD_LENGTH_CAP = int(_get_config_value("word_length_cap", _analysis_config, 10_000_000))

RENYI_GUARD = float(_get_config_value("guard", _renyi, 1e-9))
RENYI_DEFAULT_MAX_DIGITS = int(_get_config_value("default_max_digits", _renyi, 64))

ROOT_TOLERANCE = float(_get_config_value("tolerance", _root, 1e-12))
ROOT_BISECTION_STEPS = int(_get_config_value("bisection_steps", _root, 60))
ROOT_NEWTON_STEPS = int(_get_config_value("newton_steps", _root, 50))

MECHANICAL_EXTRA_BITS = int(_get_config_value("extra_bits", _mechanical, 64))
MECHANICAL_GUARD_BITS = int(_get_config_value("guard_bits", _mechanical, 32))
MECHANICAL_MAX_REFINEMENTS = int(_get_config_value("max_refinements", _mechanical, 6))

PRIMITIVITY_POWER_FACTOR = int(_get_config_value("power_factor", _primitivity, 2))

VERIFICATION = {
    "classification_max_len": int(_verification.get("classification_max_len", 60)),
    "lifting_max_len": int(_verification.get("lifting_max_len", 30)),
    "reversal_check_len": int(_verification.get("reversal_check_len", 20)),
    "special_factor_len": int(_verification.get("special_factor_len", 12)),
    "center_check_len": int(_verification.get("center_check_len", 40)),
    "psi_depth": int(_verification.get("psi_depth", 10_000)),
    "mechanical_length": int(_verification.get("mechanical_length", 10_000)),
    "branch_prefix_length": int(_verification.get("branch_prefix_length", 1_000_000)),
    "uv_length_limit": int(_verification.get("uv_length_limit", 1_000_000)),
    "branch_factor_length": int(_verification.get("branch_factor_length", 100)),
}

SWEEP_M_MAX = int(_get_config_value("m_max", _sweep, 4))
SWEEP_T_MAX = int(_get_config_value("t_max", _sweep, 4))
WORKERS_ENV = str(_get_config_value("workers_env", _sweep, "PARRY_WORKERS"))

def sweep_workers() -> int:
    """Worker count for sweeps, read from the environment at call time."""
    raw = os.getenv(WORKERS_ENV, "").strip()
    if not raw:
        return max(1, os.cpu_count() or 1)
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning(f"Ignoring non-integer {WORKERS_ENV}={raw!r}")
        return max(1, os.cpu_count() or 1)
