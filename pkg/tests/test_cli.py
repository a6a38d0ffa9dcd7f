import json
import os

import pytest

from modules.cli import COMMANDS, main, run
from modules.models.catalogue import model
from modules.utils.complex_file import export_complex_file
from modules.utils.report import PairingEntry, RunReport, Verdict, from_json, render_text, to_json

GOLDEN = os.path.join(os.path.dirname(__file__), 'golden')


def table(report, kind):
    return next(t for t in report.tables if t.kind == kind)


def test_every_command_is_registered():
    assert COMMANDS == ('models', 'homology', 'ih', 'pairing', 'les', 'obstruction')


def test_models_command():
    report = run('models')
    names = [m.name for m in report.models]
    assert 'pinched_rp2' in names
    assert report.verdict == Verdict.NOT_APPLICABLE


def test_ih_of_the_torus():
    report = run('ih', ['--model', 'torus'])
    assert table(report, 'ih').betti == [1, 2, 1]
    assert table(report, 'homology').betti == [1, 2, 1]
    assert [m.rank for m in report.maps] == [1, 2, 1]
    assert report.perversity == 'GM0'
    assert report.verdict == Verdict.PASS


def test_ih_of_the_counterexample():
    report = run('ih', ['--model', 'pinched_rp2', '--degree', '1'])
    assert table(report, 'ih').betti == [1, 1, 1]
    assert len(report.maps) == 1
    assert report.maps[0].rank == 1
    assert report.verdict == Verdict.PASS


def test_homology_of_a_pair():
    report = run('homology', ['--model', 'solid_torus_pair'])
    assert table(report, 'homology').betti == [1, 1, 0, 0]
    assert table(report, 'homology_relative').betti == [0, 0, 1, 1]
    assert all(check.verdict == Verdict.PASS for check in report.checks)


def test_pairing_command():
    report = run('pairing', ['--model', 'pinched_rp2', '--trials', '3', '--seed', '5'])
    assert table(report, 'dual_block').betti == [1, 1, 1]
    assert [p.degrees for p in report.pairings] == [[0, 2], [1, 1], [2, 0]]
    assert all(p.nonsingular for p in report.pairings)
    assert report.seed == 5 and report.trials == 3


def test_les_of_a_cone():
    report = run('les', ['--model', 'cone_of:sphere2'])
    assert [s.name for s in report.sequences] == ['les', 'les_dual']
    assert all(s.exact for s in report.sequences)
    assert report.verdict == Verdict.PASS


def test_les_cones_a_space_without_a_pair():
    report = run('les', ['--model', 'sphere2'])
    assert report.sequences[0].exact


def test_obstruction_matches_the_golden_report():
    report = run('obstruction', ['--model', 'pinched_rp2', '--trials', '3'])
    produced = json.loads(to_json(report))
    with open(os.path.join(GOLDEN, 'pinched_rp2_obstruction.json'), encoding='utf-8') as handle:
        golden = json.load(handle)
    for key, value in golden['obstruction'].items():
        assert produced['obstruction'][key] == value, key
    assert produced['obstruction']['failing_verticals']
    assert produced['tables'] == golden['tables']
    for key in ('command', 'perversity', 'verdict'):
        assert produced[key] == golden[key]


def test_json_is_byte_stable():
    first = to_json(run('ih', ['--model', 'nodal_sphere']))
    second = to_json(run('ih', ['--model', 'nodal_sphere']))
    assert first == second
    assert 'timing' not in json.loads(first)


def test_report_survives_a_json_round_trip():
    report = run('obstruction', ['--model', 'torus', '--trials', '2'])
    assert report.timing is not None
    assert from_json(to_json(report, with_timing=True)) == report


def test_text_rendering():
    text = render_text(run('ih', ['--model', 'torus']))
    assert text.startswith('ih: pass')
    assert '(1, 2, 1)' in text


@pytest.mark.parametrize('matrix', [[], [[]]])
def test_text_rendering_of_an_empty_pairing(matrix):
    report = RunReport(schema='1.0', command='pairing', argv=[])
    report.pairings.append(PairingEntry(degrees=[1, 2], relative=True, matrix=matrix, nonsingular=False,
                                        trials=0, seed=0))
    lines = render_text(report).splitlines()
    at = lines.index('  relative pairing (1, 2): singular, 0 trials agree')
    assert lines[at + 1] == '      (empty)'


def test_file_input(tmp_path):
    torus = model('torus')
    entry_text = export_complex_file(torus.complex, torus.stratification)
    path = tmp_path / 'torus.cx'
    path.write_text(entry_text, encoding='utf-8')
    by_file = run('homology', ['--file', str(path)])
    by_model = run('homology', ['--model', 'torus'])
    assert by_file.source.kind == 'file'
    assert by_file.source.digest == by_model.source.digest
    assert table(by_file, 'homology').betti == [1, 2, 1]


def test_main_prints_json(capsys):
    assert main(['ih', '--model', 'torus', '--json']) == 0
    data = json.loads(capsys.readouterr().out)
    assert data['verdict'] == 'pass'
    assert data['tables'][0]['betti'] == [1, 2, 1]


def test_main_accepts_global_flags_anywhere(capsys):
    assert main(['models', '--json']) == 0
    assert json.loads(capsys.readouterr().out)['command'] == 'models'


@pytest.mark.parametrize('argv, status', [
    (['ih', '--model', 'lens_space'], 4),
    (['homology', '--file', '/nonexistent/space.cx'], 4),
    (['ih', '--model', 'torus', '--perversity', 'list:0,2'], 3),
])
def test_main_exit_status(capsys, argv, status):
    assert main(argv) == status
    assert 'error' in capsys.readouterr().err


def test_obstruction_errors_name_the_stage(tmp_path, capsys):
    path = tmp_path / 'triangle.cx'
    path.write_text("a b c\n", encoding='utf-8')
    assert main(['obstruction', '--file', str(path)]) == 3
    assert 'error (ladder):' in capsys.readouterr().err


def test_bad_flags_exit_through_argparse():
    with pytest.raises(SystemExit) as info:
        main(['ih'])
    assert info.value.code == 2
