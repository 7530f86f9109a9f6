"""Light storage and retrieval via electromagnetically induced transparency."""

from .core import ConfigError, Grid, InputPulseSpec, PhysicalParams, read_csv, write_csv
from .polariton import (
    ControlSchedule,
    PolaritonField,
    from_polaritons,
    mixing_angle,
    rabi_frequency,
    to_polaritons,
)
from .config import SimulationConfig, dump_config, load_config

__version__ = "0.1.0"
