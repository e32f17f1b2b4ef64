"""Access to the corpus files shipped inside the package."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path


def corpus_dir() -> Path:
    return Path(str(resources.files("gatlab") / "corpus"))


def corpus_path(name: str) -> Path:
    return corpus_dir() / name


@lru_cache(maxsize=None)
def builtin_theory(name: str):
    """Elaborated theory from ``corpus/<name>.gat`` (``name`` without extension)."""
    from .dsl.elab import elaborate_stheory
    from .dsl.parser import parse_theory

    path = corpus_path(f"{name}.gat")
    return elaborate_stheory(parse_theory(path.read_text(encoding="utf-8"), str(path.name)))


def cat_eq():
    return builtin_theory("cat_eq")
