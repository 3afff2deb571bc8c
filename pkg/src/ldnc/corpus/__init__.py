"""Bundled example files: networks, solving codes, and message vectors.

* ``twounicast`` -- a six-node, two-unicast shift network with a bundled
  solving code (direct links strong, crossing links weak).
* ``butterfly`` -- the classical two-unicast butterfly embedded as
  orthogonal wire bands, with the add/cancel code.
* ``single_edge`` -- identity gain, identity code.
* ``zero_edge`` -- a dead channel; no code exists, searches exhaust.
* ``triangle`` -- a three-node network that is not layered (the chord
  skips the relay), for unfolding demonstrations.
"""

from __future__ import annotations

from importlib import resources

_SUFFIXES = (".net", ".code", ".msg")


def names() -> list[str]:
    root = resources.files(__package__)
    return sorted(
        entry.name
        for entry in root.iterdir()
        if entry.name.endswith(_SUFFIXES)
    )


def read(name: str) -> str:
    if name not in names():
        raise KeyError(f"no corpus file named {name!r}")
    return (resources.files(__package__) / name).read_text()


def location(name: str) -> str:
    """Filesystem path of a corpus file, for use on a command line."""
    if name not in names():
        raise KeyError(f"no corpus file named {name!r}")
    return str(resources.files(__package__) / name)
