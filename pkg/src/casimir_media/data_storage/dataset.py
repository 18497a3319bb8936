from collections import UserDict, namedtuple
from typing import Any, Dict, List, Union

import h5py
import numpy as np
from rich.console import Console
from rich.markup import escape
from rich.tree import Tree

from .datafile import SWEEP_GROUP

Datanode = namedtuple("Datanode", "fname path id type data attrs")


def _plain(value: Any) -> Any:
    if isinstance(value, bytes):
        return value.decode("utf-8")
    if isinstance(value, np.generic):
        return value.item()
    return value


class SweepDataset(UserDict):
    """
    Read-only view of a sweep archive written by SweepDatafile.

    The structure is walked once on construction; data are read only when a node is
    requested, by id or by path.
    """

    def __init__(self, fname: str):
        super().__init__()
        self.console = Console()
        self.fname = str(fname)
        self.update_dstree()

    def __walk_ds(self, ds: h5py.Group, tree: Tree, parent_path: str) -> None:
        for name in sorted(ds.keys()):
            sub_ds = ds[name]
            path = f"{parent_path.rstrip('/')}/{name}"
            if isinstance(sub_ds, h5py.Group):
                branch = tree.add(f"[bold magenta]:open_file_folder:({self.dsCount}) {escape(name)}")
                node_type = "group"
            elif isinstance(sub_ds, h5py.Dataset):
                branch = tree.add(
                    f"[green]:page_with_curl:({self.dsCount}) {escape(name)} {sub_ds.shape}"
                )
                node_type = "dataset"
            else:
                branch = tree.add(f"[red]:question_mark:({self.dsCount}) {escape(name)}")
                node_type = "unknown"

            attrs = {k: _plain(v) for k, v in sub_ds.attrs.items()}
            self.idTable[self.dsCount] = (path, node_type, attrs)
            self.pathTable[path] = self.dsCount
            self.dsCount += 1

            if node_type == "group":
                self.__walk_ds(sub_ds, branch, path)

    def update_dstree(self):
        with h5py.File(self.fname, "r") as fhandle:
            self.dsTree = Tree(
                f":open_file_folder: (0) {escape(self.fname)}", guide_style="bold bright_blue"
            )
            self.idTable = {0: ("/", "root", {k: _plain(v) for k, v in fhandle.attrs.items()})}
            self.pathTable = {"/": 0}
            self.dsCount = 1
            self.__walk_ds(fhandle, self.dsTree, "/")

    def __getitem__(self, key: Union[int, str]) -> Datanode:
        node_id = key if isinstance(key, int) else self.pathTable.get(key, -1)
        if node_id not in self.idTable:
            raise KeyError(f"Key '{key}' cannot be found in the Dataset '{self.fname}'")
        path, node_type, attrs = self.idTable[node_id]
        data = None
        if node_type == "dataset":
            with h5py.File(self.fname, "r") as fhandle:
                data = fhandle[path][()]
        return Datanode(self.fname, path, node_id, node_type, data, attrs)

    def __setitem__(self, key, value):
        raise TypeError(f"Dataset '{self.fname}' is read-only; '{key}' will not be changed")

    def __contains__(self, key) -> bool:
        return key in self.pathTable or key in self.idTable

    def __len__(self) -> int:
        return len(self.idTable)

    def __iter__(self):
        return iter(self.pathTable)

    def __repr__(self):
        return f"<SweepDataset file:{self.fname}>"

    @property
    def metadata(self) -> Dict[str, Any]:
        attrs = dict(self[SWEEP_GROUP].attrs)
        attrs.pop("columns", None)
        return attrs

    @property
    def columns(self) -> List[str]:
        return self[SWEEP_GROUP].attrs["columns"].split(",")

    def column(self, name: str) -> np.ndarray:
        data = self[f"{SWEEP_GROUP}/{name}"].data
        if name == "error":
            return np.array([_plain(v) for v in data], dtype=object)
        return data

    def print_tree(self) -> None:
        self.console.print(self.dsTree)
