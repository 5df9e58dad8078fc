import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase


class OrbitsCommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def run_command(self, *args):
        out = StringIO()
        call_command('orbits', *[str(arg) for arg in args], stdout=out)
        return json.loads(out.getvalue())

    def run_failing_command(self, *args):
        out = StringIO()
        with self.assertRaises(SystemExit) as cm:
            call_command('orbits', *[str(arg) for arg in args], stdout=out)
        return cm.exception.code, json.loads(out.getvalue())

    def write(self, name, text):
        path = self.dir / name
        path.write_text(text)
        return path

    def generate(self, prefix, *extra):
        return self.run_command('gen', '--n', 6, '--k', 3, '--out-dir', self.dir, '--prefix', prefix, *extra)


class InvariantCommandTests(OrbitsCommandTestCase):
    def test_two_points(self):
        record = self.run_command('invariant', self.write('two.csv', "1,1\n3,3\n"), '--full-gram')
        self.assertEqual(record['command'], 'invariant')
        self.assertEqual(record['results']['rank'], 1)
        self.assertAlmostEqual(record['results']['axis_lengths'][0], 2.0, places=14)
        self.assertEqual(record['results']['gram'], [[2, -2], [-2, 2]])

    def test_coincident_points(self):
        record = self.run_command('invariant', self.write('same.csv', "1,2\n1,2\n1,2\n"))
        self.assertEqual(record['results']['rank'], 0)
        self.assertEqual(record['results']['axis_lengths'], [0, 0])

    def test_fewer_points_than_dimensions(self):
        record = self.run_command('invariant', self.write('thin.json', '{"points": [[0, 0, 0], [1, 2, 3]]}'))
        self.assertEqual(len(record['results']['axis_lengths']), 2)

    def test_labels_are_carried_through(self):
        path = self.write('lab.json', '{"points": [[0, 0], [1, 0]], "labels": ["a", "b"]}')
        self.assertEqual(self.run_command('invariant', path)['results']['labels'], ['a', 'b'])

    def test_header_row(self):
        record = self.run_command('invariant', self.write('head.csv', "x,y\n0,0\n2,0\n"), '--header')
        self.assertAlmostEqual(record['results']['axis_lengths'][0], 2 ** 0.5, places=14)

    def test_parse_error_exits_with_two(self):
        with self.assertRaises(CommandError) as cm:
            self.run_command('invariant', self.write('bad.csv', "1,2\n3,oops\n"))
        self.assertEqual(cm.exception.returncode, 2)
        self.assertIn('line 2, field 2', str(cm.exception))


class CompareCommandTests(OrbitsCommandTestCase):
    def test_transformed_copy_is_equivalent(self):
        self.generate('fx', '--transform', 'motion', '--seed', 5)
        record = self.run_command('compare', self.dir / 'fx_a.json', self.dir / 'fx_b.json')
        self.assertIs(record['verdict'], True)
        self.assertEqual(record['group'], 'motion')
        self.assertLess(record['results']['gram_distance'], 1e-9)

    def test_similarity_copy(self):
        self.generate('sim', '--transform', 'similarity', '--seed', 6)
        record = self.run_command(
            'compare', self.dir / 'sim_a.json', self.dir / 'sim_b.json', '--group', 'similarity', '--scheme', 'max'
        )
        self.assertIs(record['verdict'], True)

    def test_noisy_copy_exits_with_one(self):
        self.generate('noisy', '--transform', 'motion', '--noise', 0.5)
        code, record = self.run_failing_command('compare', self.dir / 'noisy_a.json', self.dir / 'noisy_b.json')
        self.assertEqual(code, 1)
        self.assertIs(record['verdict'], False)

    def test_mirror_is_not_proper(self):
        a = self.write('tri.csv', "0,0\n1,0\n0,2\n")
        b = self.write('mirror.csv', "0,0\n-1,0\n0,2\n")
        self.assertIs(self.run_command('compare', a, b)['verdict'], True)
        code, record = self.run_failing_command('compare', a, b, '--group', 'proper')
        self.assertEqual(code, 1)

    def test_uncorrelated_similarity_pair_exits_with_one(self):
        a = self.write('segment.csv', "-1,0\n1,0\n0,0\n")
        b = self.write('stack.csv', "0,1\n0,1\n0,-2\n")
        code, record = self.run_failing_command('compare', a, b, '--group', 'similarity')
        self.assertEqual(code, 1)
        self.assertIs(record['verdict'], False)
        self.assertAlmostEqual(record['results']['procrustes_distance'], 6 ** 0.5, places=12)

    def test_labels_are_carried_through(self):
        a = self.write('a.json', '{"points": [[0, 0], [1, 0]], "labels": ["nose", "tail"]}')
        b = self.write('b.json', '{"points": [[0, 0], [0, 1]]}')
        results = self.run_command('compare', a, b)['results']
        self.assertEqual(results['labels_a'], ['nose', 'tail'])
        self.assertNotIn('labels_b', results)

    def test_mismatched_point_counts_exit_with_two(self):
        a = self.write('three.csv', "0,0\n1,0\n0,2\n")
        b = self.write('two.csv', "0,0\n1,0\n")
        with self.assertRaises(CommandError) as cm:
            self.run_command('compare', a, b)
        self.assertEqual(cm.exception.returncode, 2)
        self.assertIn('ShapeMismatch', str(cm.exception))


class AlignCommandTests(OrbitsCommandTestCase):
    def test_recovers_generated_transform(self):
        self.generate('al', '--transform', 'proper', '--seed', 8)
        truth = json.loads((self.dir / 'al_truth.json').read_text())
        record = self.run_command('align', self.dir / 'al_a.json', self.dir / 'al_b.json', '--group', 'proper')
        self.assertLess(record['results']['residual'], 1e-9)
        for got, expected in zip(record['results']['translation'], truth['translation']):
            self.assertAlmostEqual(got, expected, places=9)

    def test_labels_are_carried_through(self):
        a = self.write('a.json', '{"points": [[1, 0], [-1, 0]], "labels": ["p", "q"]}')
        b = self.write('b.json', '{"points": [[0, 1], [0, -1]], "labels": ["r", "s"]}')
        results = self.run_command('align', a, b)['results']
        self.assertEqual(results['labels_a'], ['p', 'q'])
        self.assertEqual(results['labels_b'], ['r', 's'])
        self.assertLess(results['residual'], 1e-12)


class DistMatrixCommandTests(OrbitsCommandTestCase):
    def manifest(self, *names):
        return self.write('manifest.json', json.dumps({'images': list(names)}))

    def test_single_image(self):
        self.write('one.csv', "0,0\n1,0\n0,1\n")
        record = self.run_command('dist-matrix', self.manifest('one.csv'))
        self.assertEqual(record['results']['matrix'], [[0]])

    def test_duplicated_file(self):
        self.write('one.csv', "0,0\n1,0\n0,1\n")
        record = self.run_command('dist-matrix', self.manifest('one.csv', 'one.csv'), '--metric', 'procrustes')
        self.assertLess(record['results']['matrix'][0][1], 1e-12)
        self.assertEqual(record['results']['matrix'][0][1], record['results']['matrix'][1][0])

    def test_bad_file_is_named_by_index(self):
        self.write('one.csv', "0,0\n1,0\n")
        self.write('bad.csv', "0,0\n1\n")
        with self.assertRaises(CommandError) as cm:
            self.run_command('dist-matrix', self.manifest('one.csv', 'bad.csv'))
        self.assertIn('image 1', str(cm.exception))


class GenCommandTests(OrbitsCommandTestCase):
    def test_deterministic_files(self):
        first = self.dir / 'first'
        second = self.dir / 'second'
        for out_dir in (first, second):
            self.run_command('gen', '--n', 4, '--k', 2, '--seed', 3, '--out-dir', out_dir, '--format', 'csv')
        self.assertEqual((first / 'image_a.csv').read_bytes(), (second / 'image_a.csv').read_bytes())
        self.assertFalse((first / 'image_b.csv').exists())

    def test_writes_truth_for_transforms(self):
        record = self.generate('t', '--transform', 'similarity')
        self.assertEqual(set(record['results']['files']), {'source', 'target', 'truth'})
        truth = json.loads((self.dir / 't_truth.json').read_text())
        self.assertEqual(truth['transform'], 'similarity')

    def test_invalid_size(self):
        with self.assertRaises(CommandError) as cm:
            self.run_command('gen', '--n', 0, '--k', 2, '--out-dir', self.dir)
        self.assertEqual(cm.exception.returncode, 2)


class SelftestCommandTests(OrbitsCommandTestCase):
    def test_zero_trials(self):
        record = self.run_command('selftest', '--trials', 0)
        self.assertIs(record['verdict'], True)

    def test_seeded_run_passes(self):
        record = self.run_command('selftest', '--trials', 3, '--seed', 7)
        self.assertIs(record['verdict'], True)
        self.assertEqual(record['results']['failed_properties'], [])
        self.assertEqual(record['results']['properties']['chirality']['passed'], 3)
