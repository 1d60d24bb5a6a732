import pytest

from exceptions import RuleSpecError
from rule_parser import format_rule, load_rule_spec, parse_rule_text, rule_parser
from services.ca_core import eca, equals, shift_ca, symbol_map

ECA_90_FILE = """\
# exclusive or of the two neighbours
name=rule90
k=2
r=1   # radius
table=01011010
"""


def test_inline_eca():
    rule = load_rule_spec('eca:110')
    assert equals(rule, eca(110))
    assert rule.name == 'eca:110'


def test_inline_shift_and_map():
    assert equals(load_rule_spec('shift:left'), shift_ca(2, 'left'))
    assert equals(load_rule_spec('shift:right:3'), shift_ca(3, 'right'))
    cascade = load_rule_spec('map:0,0,1')
    assert cascade.alphabet.k == 3
    assert equals(cascade, symbol_map(3, [0, 0, 1]))


@pytest.mark.parametrize('source, column', [
    ('eca:256', 5),
    ('eca:x', 5),
    ('shift:up', 7),
    ('map:0,5', 5),
    ('map:0,a', 7),
    ('map:1', 5),
])
def test_inline_errors_point_at_the_argument(source, column):
    with pytest.raises(RuleSpecError) as caught:
        rule_parser.parse_inline(source)
    assert caught.value.line == 1
    assert caught.value.column == column


def test_parse_rule_file_text():
    rule = parse_rule_text(ECA_90_FILE)
    assert equals(rule, eca(90))
    assert rule.name == 'rule90'
    assert rule.radius == 1


@pytest.mark.parametrize('text, line, column', [
    ('k=2\nr=1\ntable=0110\n', 3, 7),
    ('k=2\nr=1\ntable=01021010\n', 3, 10),
    ('k=2\nr=1\nsize=3\ntable=00000000\n', 3, 1),
    ('k=2\nk=2\nr=1\ntable=00000000\n', 2, 1),
    ('k=2\nr=1\n', 2, 1),
    ('k 2\n', 1, 1),
    ('k=1\nr=0\ntable=0\n', 1, 3),
    ('k=2\nr=one\ntable=00000000\n', 2, 3),
])
def test_rule_file_errors_carry_positions(text, line, column):
    with pytest.raises(RuleSpecError) as caught:
        parse_rule_text(text)
    assert (caught.value.line, caught.value.column) == (line, column)
    assert str(caught.value).startswith(f'line {line}, column {column}: ')


def test_format_rule_reads_back():
    for rule in (eca(30), shift_ca(3, 'left'), symbol_map(4, [1, 1, 3, 0])):
        parsed = parse_rule_text(format_rule(rule))
        assert equals(parsed, rule)
        assert parsed.name == rule.name


def test_load_from_file(tmp_path):
    path = tmp_path / 'xor.rule'
    path.write_text('k=2\nr=1\ntable=01100110\n', encoding='utf-8')
    rule = load_rule_spec(str(path))
    assert equals(rule, eca(102))
    assert rule.name == 'xor.rule'


def test_load_rejects_unknown_source(tmp_path):
    with pytest.raises(RuleSpecError):
        load_rule_spec(str(tmp_path / 'missing.rule'))
    with pytest.raises(RuleSpecError):
        load_rule_spec('rule110')
