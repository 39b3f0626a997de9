"""
Regenerate the golden files in `tests/golden/` from the current output
of `pyvol_constwidth.cli`. Only headers and key lists are stored, never
numbers, so the files change only when an output layout changes.
"""
import argparse
import json
import os
import sys
import tempfile

from pyvol_constwidth import cli

# (golden file, cli arguments, how the output becomes the golden content)
GOLDEN = [
    ("radius_table_header.csv", ["radius-table", "--from", "2", "--to", "3", "--format", "csv"], "header"),
    ("bounds_solve_s_keys.json", ["bounds", "--solve-s", "--format", "json"], "keys"),
    ("volume_keys.json", ["volume", "-n", "2", "--format", "json"], "record_keys"),
    ("width_check_keys.json", ["width-check", "-n", "2", "--samples", "1000", "--format", "json"], "keys"),
]


def run_cli(argv: list) -> str:
    """
    Run the cli with `argv` into a temporary file and return its text.
    """
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "out")
        code = cli.main(argv + ["--out", path])
        if code != 0:
            raise RuntimeError(f"`{' '.join(argv)}` exited with {code}")
        with open(path, encoding="utf-8") as f:
            return f.read()


def golden_content(text: str, kind: str) -> str:
    if kind == "header":
        return text.splitlines()[0] + "\n"
    payload = json.loads(text)
    if kind == "record_keys":
        payload = payload[0]
    return json.dumps(list(payload), indent=2) + "\n"


def main():
    parser = argparse.ArgumentParser(description="regenerate `tests/golden/` from cli output")
    parser.add_argument(
        "-d",
        "--golden-dir",
        type=str,
        default=os.path.join(os.path.dirname(__file__), "..", "tests", "golden"),
        help="directory holding the golden files",
    )
    parser.add_argument(
        "--check", action="store_true", help="only report files that would change, exit 1 if any"
    )
    args = parser.parse_args()

    stale = []
    for name, argv, kind in GOLDEN:
        content = golden_content(run_cli(argv), kind)
        path = os.path.join(args.golden_dir, name)
        current = None
        if os.path.exists(path):
            with open(path, encoding="utf-8") as f:
                current = f.read()
        if current == content:
            continue
        stale.append(name)
        if not args.check:
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(content)
            print(f"updated {name}")

    if args.check and stale:
        print("stale golden files: " + ", ".join(stale), file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
