"""Download the processed Hungarian heart-disease table into data/.

The file has no header row and uses -9 (sometimes ``?``) for missing values;
pass ``--columns hungarian`` to the CLI so the UCI attribute names apply.
"""

import argparse
import sys
import urllib.request
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
from nsleak.datasets import UCI_HUNGARIAN_URL  # noqa: E402


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dest", default=str(Path(__file__).resolve().parents[1] / "data"))
    ap.add_argument("--url", default=UCI_HUNGARIAN_URL)
    args = ap.parse_args(argv)
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    target = dest / "processed.hungarian.data"
    with urllib.request.urlopen(args.url, timeout=60) as resp:
        payload = resp.read()
    target.write_bytes(payload)
    rows = sum(1 for line in payload.decode().splitlines() if line.strip())
    print(f"wrote {target} ({rows} rows)")


if __name__ == "__main__":
    main()
