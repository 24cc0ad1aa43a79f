#!/usr/bin/env python3
"""Regenerate src/vidreq/data/lexicon_en.txt.

Combines a frequency-ranked list of the 10k most common English words
(npm: most-common-words-by-language) with a deterministic 20k-word sample
from a large English word array (npm: an-array-of-english-words). Ranked
words get Zipf counts scaled so the rarest ranked word still outweighs
every padding word; padding words get count 1 and act as a long tail for
edit-distance-2 fallbacks.

Requires both npm packages installed under NODE_DIR. The generated file is
committed; this script exists for provenance and regeneration only.
"""

import hashlib
import json
import re
import sys
from pathlib import Path

NODE_DIR = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("/tmp/wl/node_modules")
OUT = Path(__file__).resolve().parent.parent / "src" / "vidreq" / "data" / "lexicon_en.txt"

RANKED = NODE_DIR / "most-common-words-by-language" / "build" / "resources" / "english.txt"
ARRAY_PKG = NODE_DIR / "an-array-of-english-words" / "index.json"

SCALE = 2_000_000
PAD_COUNT = 20_000
ALPHA = re.compile(r"^[a-z]+$")

# social-video vocabulary the ranked web list under-represents; OCR text from
# product videos leans on these heavily, so give them mid-tier counts
DOMAIN_TOPUP = {
    "unboxing": 400,
    "aesthetic": 500,
    "haul": 300,
    "vibes": 600,
    "vibe": 500,
    "asmr": 300,
    "vlog": 400,
    "giveaway": 300,
    "livestream": 200,
    "subscriber": 300,
    "influencer": 300,
    "selfie": 300,
    "hashtag": 300,
    "podcast": 500,
    "playlist": 400,
    "emoji": 300,
    "smartphone": 500,
    "touchscreen": 250,
    "spoiler": 250,
    "rant": 250,
    "meme": 300,
    "apps": 600,
    "login": 400,
    "sync": 400,
    "settings": 800,
}


def main() -> None:
    counts: dict[str, int] = {}
    for rank, line in enumerate(RANKED.read_text().splitlines(), start=1):
        word = line.strip().lower()
        if not ALPHA.match(word):
            continue
        # max(2, ...) keeps every ranked word above the count-1 padding tail
        counts.setdefault(word, max(2, round(SCALE / rank)))

    for word, count in DOMAIN_TOPUP.items():
        counts[word] = max(counts.get(word, 0), count)

    pool = [
        w for w in json.loads(ARRAY_PKG.read_text())
        if ALPHA.match(w) and 3 <= len(w) <= 14 and w not in counts
    ]
    # hash-sorted sample: deterministic and free of alphabetic/length bias
    pool.sort(key=lambda w: hashlib.sha1(w.encode()).hexdigest())
    target = 10_000 + PAD_COUNT
    for w in pool:
        if len(counts) >= target:
            break
        counts[w] = 1

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w") as fh:
        for word in sorted(counts):
            fh.write(f"{word} {counts[word]}\n")
    print(f"wrote {len(counts)} words to {OUT}")


if __name__ == "__main__":
    main()
