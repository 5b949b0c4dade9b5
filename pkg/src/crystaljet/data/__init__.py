"""Embedded datasets.

All ``.dat`` files are line-oriented text: blank lines and lines starting
with ``#`` are ignored; integer matrices use row-major bracket syntax
``[[a,b],[c,d]]``.  Per-file grammars are documented in the file headers.
"""

from importlib import resources


def load_text(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text()


def load_lines(name: str) -> list[str]:
    out = []
    for raw in load_text(name).splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def data_path(name: str):
    """Filesystem path of a packaged data file (for CLI convenience)."""
    return resources.files(__package__).joinpath(name)
