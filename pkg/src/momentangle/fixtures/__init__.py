"""Complexes shipped with the package, loaded by name."""

from importlib import resources

NAMES = ("c3", "c4", "boundary_simplex_3", "rp2_6", "torus7", "torus9")


def path(name):
    name = name[:-len(".facets")] if name.endswith(".facets") else name
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}")
    return resources.files(__name__) / f"{name}.facets"


def text(name):
    return path(name).read_text()


def load(name):
    from ..cli import parse_facets_text

    return parse_facets_text(text(name))
