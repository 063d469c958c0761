"""Rewrite the CLI golden reports under tests/golden from the fixtures.

Run after an intentional change to report content or formatting, then review
the diff before committing.
"""
import argparse
import io
from pathlib import Path

from oblique.cli import run

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"
GOLDEN = ROOT / "tests" / "golden"

# (command, fixture stem)
CASES = [
    ("dual", "b1"),
    ("decompose", "b1"),
    ("metric", "b1_metric"),
    ("transform", "b1_transform"),
    ("check", "b1"),
    ("decompose", "unit_half"),
    ("metric", "diag14"),
    ("transform", "polar"),
]


def golden_name(command: str, stem: str, fmt: str) -> str:
    return f"{command}_{stem}.{'txt' if fmt == 'text' else 'json'}"


def render(command: str, stem: str, fmt: str) -> tuple[int, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run([command, "--input", str(FIXTURES / f"{stem}.json"), "--format", fmt], out, err)
    return code, out.getvalue()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true", help="report drift without writing")
    args = ap.parse_args()
    GOLDEN.mkdir(exist_ok=True)
    drift = 0
    for command, stem in CASES:
        for fmt in ("text", "json"):
            code, text = render(command, stem, fmt)
            if code != 0:
                raise SystemExit(f"{command} {stem}: exit {code}")
            path = GOLDEN / golden_name(command, stem, fmt)
            if args.check:
                if not path.exists() or path.read_text() != text:
                    print(f"drift: {path.name}")
                    drift += 1
            else:
                path.write_text(text)
                print(f"wrote {path.relative_to(ROOT)}")
    if drift:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
