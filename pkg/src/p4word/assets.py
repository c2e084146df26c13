"""Location and integrity handling for checked-in data assets.

Assets are text files: learned automata (with their provenance and
validation bounds in header comments) and the rank-16 linear
representation.  The directory can be overridden with the
``P4WORD_ASSETS`` environment variable, which is how re-learned automata
are picked up without touching the installed package.
"""
from __future__ import annotations

import hashlib
import os
from importlib import resources
from pathlib import Path

ASSET_ENV = "P4WORD_ASSETS"


class AssetError(RuntimeError):
    """A required data asset is missing or not marked as validated."""


def asset_dir() -> Path:
    override = os.environ.get(ASSET_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("p4word").joinpath("assets")))


def asset_path(name: str) -> Path:
    return asset_dir() / name


def read_asset(name: str) -> str:
    path = asset_path(name)
    if not path.is_file():
        raise AssetError(
            f"asset {name!r} not found in {path.parent} "
            f"(set {ASSET_ENV} or regenerate with `p4 learn`)"
        )
    return path.read_text(encoding="utf-8")


def write_asset(name: str, text: str) -> Path:
    path = asset_path(name)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def asset_sha256(name: str) -> str:
    return hashlib.sha256(read_asset(name).encode("utf-8")).hexdigest()


def header_lines(text: str) -> list[str]:
    """The leading '# ...' comment lines of an asset, stripped."""
    out = []
    for line in text.splitlines():
        if line.startswith("#"):
            out.append(line[1:].strip())
        elif line.strip():
            break
    return out


def require_validated(name: str, text: str) -> None:
    """Assets produced by guess-and-verify must record their validation
    bounds; refuse to serve ones that do not."""
    if not any(h.startswith("validated:") for h in header_lines(text)):
        raise AssetError(f"asset {name!r} carries no 'validated:' header; re-run validation")
