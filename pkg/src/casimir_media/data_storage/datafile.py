import datetime
from pathlib import PurePosixPath
from typing import TYPE_CHECKING, Any, Dict

import h5py
import numpy as np
from rich.console import Console

if TYPE_CHECKING:
    from ..sweep import SweepResult

SWEEP_GROUP = "/sweep"
LOG_GROUP = "/casimir_log"


class SweepDatafile:
    """
    Writes sweep results into an HDF5 archive. Every operation opens and closes the file,
    so a failed write never leaves it open.

    Layout:
        /casimir_log/LogINIT[<timestamp>]   who created the file and why
        /sweep                               group, one attribute per metadata key
        /sweep/<column>                      one float64 dataset per numeric column
        /sweep/error                         utf-8 strings, empty for rows that succeeded
    """

    def __init__(self, fname: str, operator: str = "casimir", note: str = ""):
        self.fname = str(fname)
        self.console = Console(stderr=True)

        # start from an empty archive so repeated runs do not accumulate sweeps
        with h5py.File(self.fname, "w"):
            pass
        ct = SweepDatafile.timestamp_now()
        dt = h5py.string_dtype(encoding="utf-8")
        data = np.array(f"Initiated by operator: [{operator}]. Note: [{note}]").astype(dt)
        self.save_as_dataset(data, f"LogINIT[{ct}]", LOG_GROUP, "")

    @staticmethod
    def generate_attr_str(attrs: Dict[str, Any], sep: str = "\n", eq: str = ":") -> str:
        """Format attributes as ``key1:value1\\nkey2:value2...``.

        Example:

        attrs_str = SweepDatafile.generate_attr_str({"timestamp": ct, "note": "slab sweep"})
        """
        str_list = [f"ATTR_GENERATED_BY{eq}SWEEPDATAFILE"]
        for k, v in attrs.items():
            str_list.append(f"{k}{eq}{v}")
        return sep.join(str_list)

    @staticmethod
    def timestamp_now(sep: str = "_") -> str:
        return datetime.datetime.now().strftime(f"%Y{sep}%m{sep}%d-%H{sep}%M{sep}%S")

    def create_group(self, groupkey: str, attrs: Dict[str, Any] = None) -> bool:
        success = False
        try:
            with h5py.File(self.fname, "a") as f:
                if groupkey in f and not isinstance(f[groupkey], h5py.Group):
                    raise KeyError(f"Name {groupkey} already exists but is not a group")
                grp = f.require_group(groupkey)
                for k, v in (attrs or {}).items():
                    grp.attrs[k] = _attr_value(v)
                success = True
        except Exception:
            self.console.print(f"group {groupkey} cannot be created...")
            self.console.print_exception(max_frames=20)
        return success

    def save_as_dataset(
        self, data: np.ndarray, name: str, groupkey: str, attr_str: str, overwrite=True
    ) -> bool:
        success = False
        if not self.create_group(groupkey):
            return success
        try:
            with h5py.File(self.fname, "a") as f:
                grp = f[groupkey]
                if name in grp and overwrite:
                    del grp[name]
                dset = grp.create_dataset(name, data=data)
                dt = h5py.string_dtype(encoding="utf-8")
                dset.attrs.create("created_by_casimir_media", np.array(attr_str).astype(dt))
                success = True
        except Exception:
            self.console.print_exception(max_frames=20)
        return success

    def save_sweep(self, result: "SweepResult", note: str = "") -> bool:
        """Store a SweepResult under /sweep; metadata keys become group attributes."""
        attrs = dict(result.metadata)
        attrs["columns"] = ",".join(result.columns)
        if not self.create_group(SWEEP_GROUP, attrs):
            return False
        ct = SweepDatafile.timestamp_now()
        success = True
        for j, column in enumerate(result.columns):
            values = [row[j] for row in result.rows]
            if column == "error":
                data = np.array(values, dtype=object).astype(h5py.string_dtype(encoding="utf-8"))
            else:
                data = np.asarray(values, dtype=np.float64)
            attr_str = SweepDatafile.generate_attr_str(
                {"column": column, "timestamp": ct, "note": note}
            )
            success &= self.save_as_dataset(data, column, SWEEP_GROUP, attr_str)
        return success


def _attr_value(value: Any) -> Any:
    # HDF5 attributes have no null; keep the CSV header spelling
    if value is None:
        return "null"
    return value
