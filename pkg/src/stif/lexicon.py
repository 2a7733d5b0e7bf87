"""Word-level dictionary baseline: replace informal words found in a lookup table."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .textnorm import MASK_TOKENS, is_punct

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class InformalDictionary:
    entries: Mapping[str, str] = field(default_factory=dict)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, word):
        return word in self.entries

    @property
    def multiword(self) -> bool:
        """True when some value has more than one word (output length may change)."""
        return any(len(v.split()) > 1 for v in self.entries.values())

    @property
    def idempotent(self) -> bool:
        values = {w for v in self.entries.values() for w in v.split()}
        return not (values & set(self.entries))


def parse_dictionary(lines, source: str = "<dictionary>") -> InformalDictionary:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        parts = line.split("\t") if "\t" in line else line.split(",")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise ValueError(f"{source}:{lineno}: malformed dictionary line {line!r}")
        key = parts[0].strip().lower()
        value = " ".join(parts[1].split())
        if value == key:
            continue
        entries[key] = value
    d = InformalDictionary(entries)
    if not entries:
        log.warning("%s: dictionary is empty", source)
    else:
        log.info("%s: loaded %d entries (%s-word values)", source, len(entries),
                 "multi" if d.multiword else "single")
        if not d.idempotent:
            log.warning("%s: some dictionary values are also keys; translation is not idempotent", source)
    return d


def load_dictionary(path: str | Path) -> InformalDictionary:
    """Read ``informal<TAB>formal`` or ``informal,formal`` lines. Later duplicates win."""
    with open(path, encoding="utf-8") as f:
        return parse_dictionary(f, str(path))


def translate_word_level(tokens: list[str], dictionary: InformalDictionary) -> list[str]:
    out: list[str] = []
    entries = dictionary.entries
    for tok in tokens:
        if tok in MASK_TOKENS or is_punct(tok) or tok not in entries:
            out.append(tok)
        else:
            out.extend(entries[tok].split())
    return out
