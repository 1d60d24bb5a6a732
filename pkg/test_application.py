import pytest

import config
from application import EXIT_INFEASIBLE, EXIT_MALFORMED, EXIT_OK, build_parser, run
from schemas import AnalyzeResult, ClassifyResult, CodeResult, CodingKitResult, Eq1Result, MembershipResult, OracleResult


def run_text(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.splitlines(), captured.err


def test_parser_lists_every_command():
    parser = build_parser()
    names = set(parser._subparsers._group_actions[0].choices)
    assert names == {'analyze', 'eq1', 'membership', 'classify', 'eraser', 'marker', 'decompose-finite',
                     'oracle', 'coding-kit', 'encode', 'decode', 'export-rule'}


def test_no_command_is_malformed(capsys):
    assert run([]) == EXIT_MALFORMED


def test_help_exits_cleanly(capsys):
    assert run(['--help']) == EXIT_OK
    assert 'analyze' in capsys.readouterr().out


def test_unknown_option_is_malformed(capsys):
    assert run(['analyze', '--rule', 'eca:30', '--frobnicate']) == EXIT_MALFORMED


def test_analyze_text(capsys):
    code, lines, _ = run_text(capsys, 'analyze', '--rule', 'eca:136')
    assert code == EXIT_OK
    assert lines == [
        'rule: eca:136',
        'k=2 r=1',
        'surjective: no',
        'preinjective: no',
        'orphan: 101',
        'diamond: 00000 ~ 00100',
        'minimal neighborhood: 0 1',
        'idempotent: no',
    ]


def test_analyze_json(capsys):
    assert run(['analyze', '--rule', 'eca:102', '--json']) == EXIT_OK
    result = AnalyzeResult.model_validate_json(capsys.readouterr().out)
    assert result.surjective and result.preinjective
    assert result.orphan is None and result.diamond is None
    assert result.minimal_neighborhood == [0, 1]


def test_analyze_beyond_budget_is_infeasible(capsys):
    before = config.settings
    code, lines, err = run_text(capsys, 'analyze', '--rule', 'eca:110', '--budget', '4')
    assert code == EXIT_INFEASIBLE
    assert lines == []
    assert err.startswith('error: ')
    assert config.settings == before


def test_bad_rule_is_malformed(capsys):
    code, _, err = run_text(capsys, 'analyze', '--rule', 'eca:999')
    assert code == EXIT_MALFORMED
    assert 'line 1, column 5' in err


def test_eq1_text(capsys):
    code, lines, _ = run_text(capsys, 'eq1', '--rule', 'shift:left', '--bound', '3')
    assert code == EXIT_OK
    assert lines == [
        'rule: shift:left',
        'n=1 |Q_n|=2 onto=yes identity=yes',
        'n=2 |Q_n|=2 onto=yes identity=no moved=01',
        'n=3 |Q_n|=6 onto=yes identity=no moved=001',
        'first violation: 2',
    ]


def test_eq1_json(capsys):
    assert run(['eq1', '--rule', 'eca:204', '--bound', '4', '--json']) == EXIT_OK
    result = Eq1Result.model_validate_json(capsys.readouterr().out)
    assert result.first_violation is None
    assert [row.size for row in result.rows] == [2, 2, 6, 12]


def test_membership_text(capsys):
    code, lines, _ = run_text(capsys, 'membership', '--rule', 'map:0,0,1', '--bound', '5')
    assert code == EXIT_OK
    assert lines[0] == 'rule: map:0,0,1'
    assert lines[1] == 'verdict: In(EventuallyIdempotent(2))'
    assert lines[-1] == 'membership: certified'


def test_membership_json(capsys):
    assert run(['membership', '--rule', 'shift:left', '--bound', '4', '--json']) == EXIT_OK
    result = MembershipResult.model_validate_json(capsys.readouterr().out)
    assert result.verdict == 'Out'
    assert result.witness == 'Eq1Violation'
    assert result.details == {'n': 2, 'point': '01'}
    assert result.explanation[-1] == 'membership: refuted'


def test_classify(capsys):
    code, lines, _ = run_text(capsys, 'classify', '--rules', '0,204,102', '--bound', '4')
    assert code == EXIT_OK
    assert lines == ['eca:0 In(Idempotent)', 'eca:204 In(Identity)', 'eca:102 Out(SurjectiveNonIdentity)']


def test_classify_json_range(capsys):
    assert run(['classify', '--rules', '203-204', '--bound', '3', '--json']) == EXIT_OK
    result = ClassifyResult.model_validate_json(capsys.readouterr().out)
    assert [row.rule for row in result.rows] == ['eca:203', 'eca:204']


def test_classify_bad_list(capsys):
    assert run(['classify', '--rules', '0-x']) == EXIT_MALFORMED


def test_eraser_command(capsys):
    code, lines, _ = run_text(capsys, 'eraser', '--rule', 'eca:0', '--periods', '4', '--trials', '10')
    assert code == EXIT_OK
    assert lines[0] == 'rule: eca:0'
    assert lines[1] == 'eraser 00000 -> 00100 (radius 13)'
    assert 'cyclic words checked: 30' in lines
    assert 'idempotent: yes' in lines


def test_eraser_of_surjective_rule_is_refused(capsys):
    code, _, err = run_text(capsys, 'eraser', '--rule', 'eca:102')
    assert code == EXIT_INFEASIBLE
    assert 'surjective' in err


def test_marker_command(capsys):
    code, lines, _ = run_text(capsys, 'marker', '--k', '2', '--N', '2', '--word', '0000000', '--cyclic')
    assert code == EXIT_OK
    assert lines[1] == 'input: 0000000 (cyclic)'
    assert lines[2] == 'marks: 0000000'
    assert lines[-1] == 'uncovered aperiodic positions: none'


@pytest.mark.parametrize('argv', [
    ['marker', '--k', '2', '--word', '0120'],
    ['marker', '--k', '2', '--word', '0101'],
])
def test_marker_bad_input(capsys, argv):
    assert run(argv) == EXIT_MALFORMED


def test_decompose_finite(capsys):
    code, lines, _ = run_text(capsys, 'decompose-finite', '--map', '0,0,1')
    assert code == EXIT_OK
    assert lines[0] == 'target: 0,0,1'
    assert lines[-1] == 'verified: yes'


def test_decompose_permutation_is_refused(capsys):
    assert run(['decompose-finite', '--map', '1,0']) == EXIT_INFEASIBLE
    assert run(['decompose-finite', '--map', '0,5']) == EXIT_MALFORMED


def test_oracle_json(capsys):
    assert run(['oracle', '--k', '2', '--m', '1', '--json']) == EXIT_OK
    result = OracleResult.model_validate_json(capsys.readouterr().out)
    assert result.map_count == 4
    assert result.sets_equal
    assert result.factorization_failures == 0


def test_coding_kit_json(capsys):
    assert run(['coding-kit', '--v', '0', '--k', '3', '--json']) == EXIT_OK
    result = CodingKitResult.model_validate_json(capsys.readouterr().out)
    assert (result.w, result.w0, result.w1) == ('02', '011', '012')
    assert result.m == 14
    assert result.k_sep == 26
    assert result.verified_range == [14, 22]


def test_encode_and_decode(capsys):
    code, lines, _ = run_text(capsys, 'encode', '--v', '0', '--k', '3', '--word', '1' * 14)
    assert code == EXIT_OK
    assert lines == ['02000000000002']
    assert run(['decode', '--v', '0', '--k', '3', '--block', '02000000000002', '--json']) == EXIT_OK
    result = CodeResult.model_validate_json(capsys.readouterr().out)
    assert result.output == '1' * 14


@pytest.mark.parametrize('argv', [
    ['encode', '--v', '0', '--k', '3', '--word', '1111'],
    ['encode', '--v', '0', '--k', '3', '--word', '1' * 13 + '0'],
    ['decode', '--v', '0', '--k', '3', '--block', '0000'],
    ['encode', '--v', '0', '--k', '3', '--word', '1' * 13 + '3'],
])
def test_coding_bad_input(capsys, argv):
    assert run(argv) == EXIT_MALFORMED


def test_analyze_lists_image_words(capsys):
    code, lines, _ = run_text(capsys, 'analyze', '--rule', 'eca:136', '--image-words', '3')
    assert code == EXIT_OK
    assert lines[8] == 'image words (n=3): 7'
    assert '101' not in lines[9:]
    assert run(['analyze', '--rule', 'eca:136', '--image-words', '0']) == EXIT_MALFORMED


def test_export_rule_reads_back(capsys, tmp_path):
    code, lines, _ = run_text(capsys, 'export-rule', '--rule', 'eca:90')
    assert code == EXIT_OK
    assert lines == ['name=eca:90', 'k=2', 'r=1', 'table=01011010']
    path = tmp_path / 'rule90.rule'
    path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
    code, lines, _ = run_text(capsys, 'membership', '--rule', str(path), '--bound', '4')
    assert code == EXIT_OK
    assert lines[1].startswith('verdict: Out(')


def test_eraser_verify_bound(capsys):
    code, lines, _ = run_text(capsys, 'eraser', '--rule', 'eca:0', '--verify-bound', '4', '--trials', '10')
    assert code == EXIT_OK
    assert 'cyclic words checked: 30' in lines


def test_marker_input_forms(capsys):
    code, lines, _ = run_text(capsys, 'marker', '--k', '2', '--N', '3', '--input', 'cyclic:0011010')
    assert code == EXIT_OK
    assert lines[1] == 'input: 0011010 (cyclic)'
    assert lines[3] == 'spacing >= N: yes'

    code, plain, _ = run_text(capsys, 'marker', '--k', '2', '--N', '2', '--input', '0011010')
    assert code == EXIT_OK
    assert plain[1] == 'input: 0011010'
    assert run(['marker', '--k', '2', '--input', '0011010', '--word', '0011010']) == EXIT_MALFORMED
    assert run(['marker', '--k', '2', '--input', 'cyclic:01x']) == EXIT_MALFORMED


def test_same_arguments_give_identical_output(capsys):
    argv = ['eraser', '--rule', 'eca:136', '--verify-bound', '5', '--trials', '200', '--seed', '11', '--json']
    assert run(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert run(argv) == EXIT_OK
    assert capsys.readouterr().out == first
