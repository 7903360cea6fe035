"""CPC/IPC classification symbols: parsing, truncation, dimension interning.

IPC symbols share the same grammar at these levels and go through the same
parser; there is no separate IPC pipeline.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

VALID_SECTIONS = frozenset("ABCDEFGHY")


class CpcError(ValueError):
    """Base class for classification symbol errors."""


class BadSection(CpcError):
    """Section letter outside A-H, Y."""


class BadFormat(CpcError):
    """Symbol does not match the CPC grammar."""


class GranularityLevel(enum.IntEnum):
    """Truncation depth of a CPC symbol; deeper level = finer dimensions."""

    SECTION = 1
    CLASS = 2
    SUBCLASS = 3
    MAIN_GROUP = 4
    SUBGROUP = 5

    @classmethod
    def from_name(cls, name: str) -> "GranularityLevel":
        try:
            return _LEVEL_NAMES[name.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown granularity level: {name!r}") from None

    @property
    def cli_name(self) -> str:
        return _LEVEL_CLI[self]


_LEVEL_NAMES = {
    "section": GranularityLevel.SECTION,
    "class": GranularityLevel.CLASS,
    "subclass": GranularityLevel.SUBCLASS,
    "group": GranularityLevel.MAIN_GROUP,
    "subgroup": GranularityLevel.SUBGROUP,
}
_LEVEL_CLI = {level: name for name, level in _LEVEL_NAMES.items()}


@dataclass(frozen=True)
class CpcCode:
    """Parsed classification symbol. main_group/subgroup 0 means absent."""

    section: str
    class_num: int
    subclass: str
    main_group: int = 0
    subgroup: int = 0

    def render(self) -> str:
        """Canonical text at the deepest available depth."""
        return truncate(self, GranularityLevel.SUBGROUP)


# "H04W 88/02", "H04W88/02", "H04W 88", "H04W"; case handled by upper() first.
_CPC_RE = re.compile(r"([A-HY])(\d{2})([A-Z])(?:\s*(\d{1,4})(?:\s*/\s*(\d{1,6}))?)?")


def parse_cpc(raw: str) -> CpcCode:
    """Parse a CPC/IPC symbol; accepts spaced, compact, and lowercase forms."""
    text = raw.strip().upper()
    if not text:
        raise BadFormat("empty symbol")
    m = _CPC_RE.fullmatch(text)
    if m is None:
        if text[0].isalpha() and text[0] not in VALID_SECTIONS:
            raise BadSection(f"section {text[0]!r} not in A-H, Y: {raw!r}")
        raise BadFormat(f"not a CPC symbol: {raw!r}")
    section, class_num, subclass, main_group, subgroup = m.groups()
    return CpcCode(
        section=section,
        class_num=int(class_num),
        subclass=subclass,
        main_group=int(main_group) if main_group else 0,
        subgroup=int(subgroup) if subgroup else 0,
    )


def truncate(code: CpcCode, level: GranularityLevel) -> str:
    """Canonical prefix of a code at the given level.

    Falls back to the deepest available prefix when the code lacks the
    requested depth.
    """
    if level == GranularityLevel.SECTION:
        return code.section
    if level == GranularityLevel.CLASS:
        return f"{code.section}{code.class_num:02d}"
    if level == GranularityLevel.SUBCLASS:
        return f"{code.section}{code.class_num:02d}{code.subclass}"
    if level == GranularityLevel.MAIN_GROUP or code.subgroup == 0:
        base = f"{code.section}{code.class_num:02d}{code.subclass}"
        if code.main_group == 0:
            return base
        return f"{base}{code.main_group}"
    return (
        f"{code.section}{code.class_num:02d}{code.subclass}"
        f"{code.main_group}/{code.subgroup:02d}"
    )


class DimensionRegistry:
    """Dense interner: string key -> id in first-seen order, plus inverse."""

    def __init__(self, texts: list[str] | None = None):
        self._texts: list[str] = list(texts) if texts else []
        self._ids: dict[str, int] = {t: i for i, t in enumerate(self._texts)}
        if len(self._ids) != len(self._texts):
            raise ValueError("duplicate keys in registry seed")

    def intern(self, key: str) -> int:
        if not key:
            raise ValueError("empty registry key")
        existing = self._ids.get(key)
        if existing is not None:
            return existing
        new_id = len(self._texts)
        self._ids[key] = new_id
        self._texts.append(key)
        return new_id

    def id_of(self, key: str) -> int | None:
        return self._ids.get(key)

    def text_of(self, dim: int) -> str:
        return self._texts[dim]

    @property
    def texts(self) -> list[str]:
        return self._texts

    def __len__(self) -> int:
        return len(self._texts)

    def __contains__(self, key: str) -> bool:
        return key in self._ids

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DimensionRegistry):
            return NotImplemented
        return self._texts == other._texts
