"""Engine configuration loading."""

from pathlib import Path
from typing import Any, Dict, Optional

import yaml

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent / "config" / "engine.yaml"


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load the engine configuration.

    Args:
        config_path: Path to engine.yaml. If None, uses default location.

    Returns:
        Configuration dictionary
    """
    if config_path is None:
        config_path = DEFAULT_CONFIG_PATH

    with open(config_path, 'r') as f:
        return yaml.safe_load(f)


def config_value(key: str, default: Any = None, config_path: Optional[str] = None) -> Any:
    """
    Look up a dotted key such as ``"scan.extra_levels"``.

    Args:
        key: Dotted path into the configuration
        default: Returned when the key is absent
        config_path: Optional alternative configuration file

    Returns:
        The configured value or ``default``
    """
    node: Any = load_config(config_path)
    for part in key.split('.'):
        if not isinstance(node, dict) or part not in node:
            return default
        node = node[part]
    return node
