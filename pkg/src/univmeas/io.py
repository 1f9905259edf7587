"""Atomic file output and number formatting shared by the CLI and the sweep writer."""

from __future__ import annotations

import math
import os
import tempfile


def fmt(x) -> str:
    """17 significant digits, lossless for doubles; infinities spelled ``inf``."""
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def json_number(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return x


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
