# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import hashlib
import json
import math
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Any, Iterator, Union

import numpy as np

PathType = Union[str, "os.PathLike[str]"]


@contextmanager
def atomic_write(path: PathType, mode: str = "w") -> Iterator[IO[Any]]:
    """
    Opens a temporary file next to ``path`` and renames it over ``path`` once the
    block exits without an exception, so readers never see a partial file.

    Parameters
    ----------
    path : str or PathLike
        Final destination. Parent directories are created.
    mode : str (default="w")
        ``"w"`` for text or ``"wb"`` for bytes

    Examples
    --------
    >>> import tempfile, os
    >>> with tempfile.TemporaryDirectory() as tmp:
    ...     target = os.path.join(tmp, "out.txt")
    ...     with atomic_write(target) as handle:
    ...         _ = handle.write("done")
    ...     print(open(target).read())
    done
    """
    destination = Path(path)
    destination.parent.mkdir(parents=True, exist_ok=True)
    handle = tempfile.NamedTemporaryFile(
        mode=mode,
        dir=destination.parent,
        prefix=f".{destination.name}.",
        suffix=".tmp",
        delete=False,
        **({} if "b" in mode else {"encoding": "utf-8", "newline": ""}),
    )
    try:
        with handle:
            yield handle
        os.replace(handle.name, destination)
    except BaseException:
        Path(handle.name).unlink(missing_ok=True)
        raise


def to_jsonable(value: Any) -> Any:
    """
    Converts numpy scalars and arrays, tuples and sets into plain JSON types.
    Non-finite floats become ``None``.
    """
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, (set, frozenset)):
        return sorted(to_jsonable(item) for item in value)
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def dumps(value: Any) -> str:
    """
    Canonical JSON text: sorted keys and stable separators.
    """
    return json.dumps(to_jsonable(value), sort_keys=True, indent=2, allow_nan=False)


def config_hash(config: Any) -> str:
    """
    SHA-256 of the canonical JSON form of ``config``.

    >>> config_hash({"b": 1, "a": 2}) == config_hash({"a": 2, "b": 1})
    True
    """
    canonical = json.dumps(to_jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
