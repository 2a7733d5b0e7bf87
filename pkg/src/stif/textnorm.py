"""Preprocessing for informal Indonesian text.

Lowercasing, squeezing of character runs, tokenization and masking of
numbers, accounts, dates and percentages.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

NUM = "<num>"
ACCOUNT = "<account>"
DATE = "<date>"
PERCENT = "<percent>"

MASK_SURFACES = {"num": NUM, "account": ACCOUNT, "date": DATE, "percent": PERCENT}
MASK_TOKENS = frozenset(MASK_SURFACES.values())
ALL_MASK_KINDS = frozenset(MASK_SURFACES)

PUNCTUATION = frozenset(".,?!;:()\"'")

_REPEAT_RE = re.compile(r"(.)\1{2,}", re.DOTALL)

_DATE_RE = re.compile(r"\d{1,2}[/-]\d{1,2}[/-]\d{2,4}")
_PERCENT_RE = re.compile(r"\d+(?:[.,]\d+)*%")
_NUMBER_RE = re.compile(r"\d+(?:[.,]\d+)*")
_HANDLE_RE = re.compile(r"@\w+")
_MASK_RE = re.compile(r"<(?:num|account|date|percent)>")

# tried in order at the start of a token; first match that ends on a
# token boundary wins
_PROTECTED = (_MASK_RE, _DATE_RE, _PERCENT_RE, _HANDLE_RE, _NUMBER_RE)


@dataclass(frozen=True)
class NormalizationConfig:
    lowercase: bool = True
    squeeze_repeats: bool = True
    mask_kinds: frozenset = field(default_factory=lambda: ALL_MASK_KINDS)
    apply_to: str = "informal"  # "informal" or "both"

    def __post_init__(self):
        if self.apply_to not in ("informal", "both"):
            raise ValueError(f"apply_to must be 'informal' or 'both', got {self.apply_to!r}")
        unknown = set(self.mask_kinds) - ALL_MASK_KINDS
        if unknown:
            raise ValueError(f"unknown mask kinds: {sorted(unknown)}")
        object.__setattr__(self, "mask_kinds", frozenset(self.mask_kinds))

    def for_side(self, side: str) -> "NormalizationConfig":
        """Config to use for one side of a pair; formal text is only tokenized
        unless ``apply_to == "both"``."""
        if side == "informal" or self.apply_to == "both":
            return self
        return replace(self, lowercase=False, squeeze_repeats=False, mask_kinds=frozenset())


TOKENIZE_ONLY = NormalizationConfig(lowercase=False, squeeze_repeats=False, mask_kinds=frozenset())


def squeeze_repeats(text: str) -> str:
    """Cut every run of three or more identical characters down to two."""
    return _REPEAT_RE.sub(r"\1\1", text)


def _protected_at(chunk: str, i: int) -> int:
    """End of a protected span starting at ``i``, or -1."""
    for pattern in _PROTECTED:
        m = pattern.match(chunk, i)
        if m is None:
            continue
        end = m.end()
        if end == len(chunk) or chunk[end] in PUNCTUATION:
            return end
    return -1


def tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    for chunk in text.split():
        buf: list[str] = []
        i = 0
        while i < len(chunk):
            if not buf:
                end = _protected_at(chunk, i)
                if end > 0:
                    tokens.append(chunk[i:end])
                    i = end
                    continue
            ch = chunk[i]
            # digit group separators stay inside words such as "rp50.000"
            inner_sep = (ch in ".," and buf and buf[-1].isdigit()
                         and i + 1 < len(chunk) and chunk[i + 1].isdigit())
            if ch in PUNCTUATION and not inner_sep:
                if buf:
                    tokens.append("".join(buf))
                    buf = []
                tokens.append(ch)
            else:
                buf.append(ch)
            i += 1
        if buf:
            tokens.append("".join(buf))
    return tokens


def detokenize(tokens: list[str]) -> str:
    return " ".join(tokens)


def mask_kind(token: str) -> str | None:
    """Which mask a token falls under, by priority date > percent > account > num."""
    if token in MASK_TOKENS:
        return None
    if _DATE_RE.fullmatch(token):
        return "date"
    if _PERCENT_RE.fullmatch(token):
        return "percent"
    if len(token) > 1 and token.startswith("@"):
        return "account"
    if _NUMBER_RE.fullmatch(token):
        return "num"
    return None


def mask_entities(tokens: list[str], kinds=ALL_MASK_KINDS) -> list[str]:
    out = []
    for tok in tokens:
        kind = mask_kind(tok)
        out.append(MASK_SURFACES[kind] if kind is not None and kind in kinds else tok)
    return out


def normalize(text: str, config: NormalizationConfig = NormalizationConfig()) -> list[str]:
    """lowercase -> squeeze_repeats -> tokenize -> mask_entities, per the config flags."""
    if config.lowercase:
        text = text.lower()
    if config.squeeze_repeats:
        text = squeeze_repeats(text)
    tokens = tokenize(text)
    if config.mask_kinds:
        tokens = mask_entities(tokens, config.mask_kinds)
    return tokens


def is_punct(token: str) -> bool:
    return len(token) == 1 and token in PUNCTUATION
