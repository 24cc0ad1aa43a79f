"""Noisy-channel spell correction over a bundled frequency lexicon.

A token is replaced by the highest-frequency lexicon word within edit
distance 1, falling back to edit distance 2, else left unchanged. Edits are
deletes, transposes, replaces, and inserts over a-z. Frequency ties break
lexicographically so corrections are stable across platforms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"
_ALPHA_TOKEN = re.compile(r"[A-Za-z]+")


@dataclass(frozen=True)
class FrequencyLexicon:
    counts: dict[str, int]
    total: int

    def __contains__(self, word: str) -> bool:
        return word in self.counts

    def frequency(self, word: str) -> int:
        return self.counts.get(word, 0)


def load_lexicon(path=None) -> FrequencyLexicon:
    """Load `word count` lines; defaults to the bundled English lexicon."""
    if path is None:
        raw = resources.files("vidreq.data").joinpath("lexicon_en.txt").read_text("utf-8")
    else:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    counts: dict[str, int] = {}
    for line in raw.splitlines():
        if not line.strip():
            continue
        word, count = line.split()
        counts[word] = int(count)
    if not all(c >= 1 for c in counts.values()):
        raise ValueError("lexicon counts must all be >= 1")
    return FrequencyLexicon(counts=counts, total=sum(counts.values()))


def edits1(word: str) -> set[str]:
    """All strings one delete/transpose/replace/insert away from `word`."""
    splits = [(word[:i], word[i:]) for i in range(len(word) + 1)]
    deletes = [left + right[1:] for left, right in splits if right]
    transposes = [
        left + right[1] + right[0] + right[2:] for left, right in splits if len(right) > 1
    ]
    replaces = [left + c + right[1:] for left, right in splits if right for c in _ALPHABET]
    inserts = [left + c + right for left, right in splits for c in _ALPHABET]
    return set(deletes + transposes + replaces + inserts)


def _known_edits2(word: str, lexicon: FrequencyLexicon) -> set[str]:
    counts = lexicon.counts
    return {e2 for e1 in edits1(word) for e2 in edits1(e1) if e2 in counts}


def _best(candidates: Iterable[str], lexicon: FrequencyLexicon) -> str:
    # highest frequency wins; lexicographically smallest word breaks ties
    return min(candidates, key=lambda w: (-lexicon.frequency(w), w))


def correct_spelling(word: str, lexicon: FrequencyLexicon) -> str:
    """Most probable correction for a lowercase alphabetic token."""
    if word in lexicon:
        return word
    candidates = {e for e in edits1(word) if e in lexicon}
    if candidates:
        return _best(candidates, lexicon)
    candidates = _known_edits2(word, lexicon)
    if candidates:
        return _best(candidates, lexicon)
    return word


def _recase(corrected: str, original: str) -> str:
    if original.isupper() and len(original) > 1:
        return corrected.upper()
    if original[:1].isupper():
        return corrected.capitalize()
    return corrected


def correct_text(text: str, lexicon: FrequencyLexicon) -> str:
    """Correct each alphabetic token of `text` in place, preserving case
    shape and all separators."""

    def fix(match: re.Match) -> str:
        original = match.group(0)
        corrected = correct_spelling(original.lower(), lexicon)
        return _recase(corrected, original) if corrected != original.lower() else original

    return _ALPHA_TOKEN.sub(fix, text)
