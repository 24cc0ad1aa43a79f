"""Stub OCR adapter: `stub_ocr <frame_path>`.

Echoes the sidecar file `<frame_path>.regions.json` when present, else an
empty region list. The frame itself only has to exist.
"""

import json
import sys
from pathlib import Path


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: stub_ocr <frame_path>", file=sys.stderr)
        return 2
    frame_path = Path(argv[0])
    if not frame_path.is_file():
        print(f"stub_ocr: no such frame: {frame_path}", file=sys.stderr)
        return 3
    sidecar = Path(str(frame_path) + ".regions.json")
    if sidecar.is_file():
        try:
            regions = json.loads(sidecar.read_text("utf-8")).get("regions", [])
        except json.JSONDecodeError as exc:
            print(f"stub_ocr: bad sidecar: {exc}", file=sys.stderr)
            return 3
    else:
        regions = []
    json.dump({"regions": regions}, sys.stdout)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
