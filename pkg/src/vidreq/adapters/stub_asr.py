"""Stub ASR adapter: `stub_asr <media_path> <max_seconds>`.

The "media" file is JSON {"language": ..., "segments": [{start, end, text}]}.
Segments past the cap are dropped; a segment spanning the cap is truncated.
Exits nonzero when the media file is missing or malformed, which the caller
treats as an unavailable backend.
"""

import json
import sys


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 2:
        print("usage: stub_asr <media_path> <max_seconds>", file=sys.stderr)
        return 2
    media_path, max_seconds = argv[0], float(argv[1])
    try:
        with open(media_path, "r", encoding="utf-8") as fh:
            media = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"stub_asr: cannot read media: {exc}", file=sys.stderr)
        return 3
    segments = []
    for seg in media.get("segments", []):
        start, end = float(seg["start"]), float(seg["end"])
        if start >= max_seconds:
            continue
        segments.append(
            {"start": start, "end": min(end, max_seconds), "text": str(seg.get("text", ""))}
        )
    json.dump({"language": media.get("language"), "segments": segments}, sys.stdout)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
