"""Built-in protocol scenarios, shipped as protocol-language source files."""

from importlib import resources

__all__ = ["SCENARIOS", "scenario_text", "load_scenario"]

SCENARIOS = {
    "ewf": "Extended Wigner's friend: four agents, two labs, halting on ok & okbar",
    "wigner": "Original Wigner's friend: one friend, one spin, one light",
}


def scenario_text(name):
    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    return resources.files(__name__).joinpath(f"{name}.protocol").read_text(encoding="utf-8")


def load_scenario(name):
    from ..protocol import parse_protocol

    return parse_protocol(scenario_text(name))
