"""Python access to the minimal-CAD toolkit."""

from ._mincad import (  # noqa: F401
    Cad,
    Document,
    Family,
    MincadError,
    Tree,
    bell,
    behaviour,
    build_tree,
    confluence,
    corpus,
    cross_validate,
    fiber,
    liftable,
    load_cadspec,
    minimal,
    minimum_cad_1d,
    parse_cadspec,
)
