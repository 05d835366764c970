import copy
import logging
import json
import os
import appdirs
import sys

APPNAME = "cdag"
APPAUTHOR = "cdag"
USER_DIRECTORY = appdirs.user_data_dir(APPNAME, APPAUTHOR)
LOG_FILE = os.path.join(USER_DIRECTORY, "cdag.log")
CONFIG_FILE = os.path.join(USER_DIRECTORY, "config.json")
SEED_VARIABLE = "CDAG_SEED"


DEFAULT_PHYSICS = {
    "alpha": 1 / 137.035999084,
    "electron_mass": 1.0,
    "abc": {
        "masses": {"A": 1.0, "B": 1.0, "C": 1.0},
        "coupling": 0.1,
    },
    "energy_scale": 1.0,
}
DEFAULT_NUMERICS = {
    "propagator_guard": 1e-12,
    "on_shell_tolerance": 1e-8,
    "comparison_tolerance": 1e-10,
}
DEFAULT_DEVICE = {
    "count": 1,
    "flops_rate": 26.8e9,
    "mem_bandwidth": 20e9,
    "interconnect": 16e9,
}
DEFAULT_BENCH = {
    "repetitions": 31,
    "warmup": 3,
    "samples": 64,
    "workers": 1,
    "n_exponents": [0, 8],
}


def _ensure_user_directory_exists() -> bool:
    """Ensure that the user directory exists. Returns False if it cannot be created."""
    try:
        if not os.path.exists(USER_DIRECTORY):
            os.makedirs(USER_DIRECTORY)
        return True
    except OSError as e:
        print(f"An error occurred while creating the user directory: {e}", file=sys.stderr)
        return False


def setup_logging(level: str | int = logging.INFO) -> None:
    """Route the logging module to the log file in the user directory."""
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    if not _ensure_user_directory_exists():
        logging.basicConfig(level=level, format="%(asctime)s  [%(levelname)s] %(message)s")
        return
    logging.basicConfig(
        level=level,
        format="%(asctime)s  [%(levelname)s] %(message)s",
        datefmt="%H:%M:%S",
        filename=LOG_FILE,
        filemode="w",
    )


def open_config_folder():
    """Cross-platform function to open the configuration folder in the file explorer."""
    try:
        os.startfile(USER_DIRECTORY)
    except AttributeError:
        import subprocess

        if sys.platform.startswith("darwin"):
            subprocess.call(["open", USER_DIRECTORY])
        elif sys.platform.startswith("linux"):
            subprocess.call(["xdg-open", USER_DIRECTORY])
        elif sys.platform.startswith("win"):
            subprocess.call(["explorer", USER_DIRECTORY])


def _create_default_configuration() -> dict:
    """Create a default configuration for cdag."""
    configuration = {
        "physics": copy.deepcopy(DEFAULT_PHYSICS),
        "numerics": dict(DEFAULT_NUMERICS),
        "optimizer": {
            "order_seed": 0,
            "hash_iterations": 8,
        },
        "device": dict(DEFAULT_DEVICE),
        "bench": copy.deepcopy(DEFAULT_BENCH),
        "logging": {
            "level": "INFO",
        },
    }
    return configuration


def _update_configuration(config: dict, template: dict) -> dict:
    """Recursively update the configuration dictionary with missing keys from the template."""
    for key in template:
        if key not in config:
            config[key] = template[key]
        elif isinstance(config[key], dict) and isinstance(template[key], dict):
            config[key] = _update_configuration(config[key], template[key])
    return config


def _check_for_configuration() -> None:
    """Make sure the configuration file/dir exists. If not, create it."""
    if not _ensure_user_directory_exists():
        return

    try:
        if not os.path.exists(CONFIG_FILE) or os.path.getsize(CONFIG_FILE) == 0:
            with open(CONFIG_FILE, "w") as f:
                json.dump(_create_default_configuration(), f, indent=4)
            logging.debug(f"Created configuration file with default settings at {CONFIG_FILE}")
    except OSError as e:
        logging.error(f"An error occurred while creating the configuration file: {e}")
        return

    # Older files may miss keys that were added to the template since
    try:
        with open(CONFIG_FILE, "r") as f:
            content = json.load(f)
        content = _update_configuration(content, _create_default_configuration())
        with open(CONFIG_FILE, "w") as f:
            json.dump(content, f, indent=4)
    except (OSError, json.JSONDecodeError) as e:
        logging.error(f"An error occurred while updating the configuration file: {e}")


def read_configuration() -> dict:
    """Read the configuration file for cdag, falling back to the defaults."""
    _check_for_configuration()
    try:
        with open(CONFIG_FILE, "r") as f:
            return _update_configuration(json.loads(f.read()), _create_default_configuration())
    except (OSError, json.JSONDecodeError) as e:
        logging.error(f"Error reading the configuration file: {e}")
        return _create_default_configuration()


def write_configuration(configuration: dict):
    """Write the configuration to the configuration file."""
    _check_for_configuration()
    try:
        with open(CONFIG_FILE, "w") as f:
            json.dump(configuration, f, indent=4)
        logging.debug(f"Wrote configuration to {CONFIG_FILE}")
    except OSError as e:
        logging.error(f"An error occurred while writing to the configuration file: {e}")


def default_seed(configuration: dict | None = None) -> int:
    """Seed used wherever randomness exists: $CDAG_SEED, else the configured order seed."""
    value = os.environ.get(SEED_VARIABLE)
    if value is not None:
        try:
            return int(value)
        except ValueError:
            logging.warning(f"Ignoring non-integer {SEED_VARIABLE}={value!r}")
    configuration = configuration or _create_default_configuration()
    return int(configuration["optimizer"]["order_seed"])
