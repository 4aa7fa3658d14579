import textwrap

import pytest

from envtheory.config import ConfigError, PhiMode, load_config, parse_config
from envtheory.model import CustomPotential, ExponentialWell, PowerLawPotential

BASE = """
[system]
potential = linear

[state]
n = 0 0
l = 0 0
L = 0
"""


def _cfg(text):
    return parse_config(textwrap.dedent(text))


def test_defaults():
    cfg = _cfg(BASE)
    assert cfg.system.N == 3 and cfg.system.D == 3
    pot = cfg.system.terms[0][1]
    assert isinstance(pot, PowerLawPotential) and (pot.a, pot.b) == (0.5, 1.0)
    assert cfg.phi_modes == (PhiMode("fixed", 2.0),)
    assert not cfg.oracle and cfg.qstar_max == 18 and cfg.format == "table"


def test_full_file(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(BASE + textwrap.dedent("""
        [method]
        phi = fixed:2, dos, calibrate:2.753  # three rows

        [oracle]
        enabled = yes
        qstar_max = 12

        [output]
        format = csv
        precision = 6
        """))
    cfg = load_config(path)
    assert [m.label for m in cfg.phi_modes] == ["2", "DOS", "GS"]
    assert cfg.oracle and cfg.qstar_max == 12
    assert cfg.format == "csv" and cfg.precision == 6


def test_potentials():
    g = _cfg(BASE.replace("linear", "gaussian")).system.terms[0][1]
    assert isinstance(g, ExponentialWell) and (g.a, g.b, g.gamma) == (200.0, 1.0, 2.0)
    c = _cfg(BASE.replace("linear", "coulomb")).system.terms[0][1]
    assert (c.a, c.b) == (3.0, -1.0)
    p = _cfg(BASE.replace("linear", "powerlaw\na = 1\nb = 0.5")).system.terms[0][1]
    assert (p.a, p.b) == (1.0, 0.5)


def test_custom_expression_matches_builtin():
    cfg = _cfg(BASE.replace("linear", "custom\nexpression = r/2"))
    pot = cfg.system.terms[0][1]
    assert isinstance(pot, CustomPotential)
    assert pot.V(3.0) == pytest.approx(1.5) and pot.dV(3.0) == pytest.approx(0.5)
    assert pot.d2V(3.0) == pytest.approx(0.0)


def test_custom_kinetic():
    cfg = _cfg(BASE.replace("[state]", "kinetic = custom\nkinetic_expression = sqrt(p**2 + 1)\n[state]"))
    T = cfg.system.kinetic
    assert T.T(1.0) == pytest.approx(2**0.5)


@pytest.mark.parametrize(
    "text,line",
    [
        ("[system]\npotential = linear\nfoo = 1\n[state]\nn = 0 0\n", 3),
        ("[system]\npotential = linear\n[state]\nn = 0 0\n[bogus]\nx = 1\n", 5),
        ("[system]\npotential = yukawa\n[state]\n", 2),
        ("[system]\npotential = linear\na = abc\n[state]\n", 3),
        ("potential = linear\n", 1),
        ("[system]\npotential = custom\nexpression = r +* 2\n[state]\n", 3),
        ("[system]\npotential = custom\nexpression = r * q\n[state]\n", 3),
        ("[system]\npotential = linear\n[state]\nn = 0 x\n", 4),
        ("[system]\npotential = linear\n[state]\n[method]\nphi = fixed\n", 5),
        ("[system]\npotential = linear\n[state]\n[output]\nformat = xml\n", 5),
    ],
)
def test_errors_name_the_line(text, line):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.lineno == line
    assert str(info.value).startswith(f"line {line}:")


def test_missing_sections():
    with pytest.raises(ConfigError, match="state"):
        parse_config("[system]\npotential = linear\n")


def test_wrong_number_of_quanta():
    with pytest.raises(ConfigError, match="2 values"):
        _cfg(BASE.replace("n = 0 0", "n = 0"))


def test_key_case_is_significant():
    cfg = _cfg(BASE.replace("l = 0 0", "l = 2, 0").replace("L = 0", "L = 2"))
    assert cfg.state.quanta == ((0, 2), (0, 0)) and cfg.state.L == 2
