import runpy
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parent.parent / "demos"

EXPECTED = {
    "extended_friend.py": "W_L=ok: ensemble says 1/2, fbar-collapse says 0",
    "original_wigner.py": "friend-up overlap 1/2*sqrt(2)",
    "write_a_protocol.py": "49/50 True",
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_demo_runs(name, capsys):
    runpy.run_path(str(DEMOS / name), run_name="__main__")
    assert EXPECTED[name] in capsys.readouterr().out


def test_every_demo_is_covered():
    assert sorted(p.name for p in DEMOS.glob("*.py")) == sorted(EXPECTED)
