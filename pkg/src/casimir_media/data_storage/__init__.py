from .datafile import SweepDatafile
from .dataset import SweepDataset

__all__ = ["SweepDatafile", "SweepDataset"]
