"""
``python manage.py orbits <subcommand>``

Every subcommand prints one JSON result record on stdout. Exit codes:
0 success or equivalent, 1 not equivalent or a failed self-test property,
2 usage, parse or shape errors.
"""

import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from orbits.conf import get_setting
from orbits.exceptions import OrbitError
from orbits.generation import TransformKind, generate_instance
from orbits.imagefiles import FORMATS, read_image, read_images, read_manifest, write_image
from orbits.log import set_console_level
from orbits.records import ResultRecord, dumps
from orbits.sdk import ShapeOrbitSDK

logger = logging.getLogger('orbit_shapes')

GROUPS = ('motion', 'proper', 'similarity')
SCHEMES = ('max', 'mean', 'gmean')
METRICS = ('gram', 'procrustes')


class Command(BaseCommand):
    help = 'Invariants, equivalence tests, alignment and distances for labeled point images.'

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest='subcommand', required=True)

        invariant = subparsers.add_parser('invariant', help='Centroid, axis lengths, multiplicities and rank.')
        invariant.add_argument('file')
        invariant.add_argument('--header', action='store_true', help='Skip the first CSV row.')
        invariant.add_argument('--full-gram', action='store_true', help='Include the n×n Gram matrix.')
        invariant.add_argument('--tol-rank', type=float, default=get_setting('TOL_RANK'))

        compare = subparsers.add_parser('compare', help='Decide whether two images share an orbit.')
        compare.add_argument('file_a')
        compare.add_argument('file_b')
        compare.add_argument('--group', choices=GROUPS, default=get_setting('DEFAULT_GROUP'))
        compare.add_argument('--scheme', choices=SCHEMES, default=get_setting('DEFAULT_SCHEME'))
        compare.add_argument('--tol', type=float, default=get_setting('TOL_EQ'))
        compare.add_argument('--tol-rank', type=float, default=get_setting('TOL_RANK'))
        compare.add_argument('--header', action='store_true')

        align = subparsers.add_parser('align', help='Recover the transform carrying image A onto image B.')
        align.add_argument('file_a')
        align.add_argument('file_b')
        align.add_argument('--group', choices=GROUPS, default=get_setting('DEFAULT_GROUP'))
        align.add_argument('--header', action='store_true')

        dist = subparsers.add_parser('dist-matrix', help='Pairwise orbit distances for a manifest of images.')
        dist.add_argument('manifest')
        dist.add_argument('--group', choices=GROUPS, default=get_setting('DEFAULT_GROUP'))
        dist.add_argument('--metric', choices=METRICS, default='gram')
        dist.add_argument('--scheme', choices=SCHEMES, default=get_setting('DEFAULT_SCHEME'))
        dist.add_argument('--workers', type=int, default=get_setting('DIST_MATRIX_WORKERS'))
        dist.add_argument('--header', action='store_true')

        gen = subparsers.add_parser('gen', help='Write a seeded random image and a transformed copy.')
        gen.add_argument('--n', type=int, required=True)
        gen.add_argument('--k', type=int, required=True)
        gen.add_argument('--seed', type=int, default=0)
        gen.add_argument('--transform', choices=[kind.value for kind in TransformKind], default='none')
        gen.add_argument('--noise', type=float, default=0.0)
        gen.add_argument('--out-dir', default='.')
        gen.add_argument('--prefix', default='image')
        gen.add_argument('--format', choices=FORMATS, default='json')

        selftest = subparsers.add_parser('selftest', help='Run the randomized property sweeps.')
        selftest.add_argument('--trials', type=int, default=100)
        selftest.add_argument('--seed', type=int, default=0)

    def handle(self, *args, **options):
        if options['verbosity'] >= 2:
            set_console_level(logging.INFO)
        subcommand = options['subcommand']
        handler = getattr(self, '_' + subcommand.replace('-', '_'))
        try:
            record, exit_code = handler(options)
        except OrbitError as e:
            raise CommandError(f"{type(e).__name__}: {e}", returncode=2) from e
        self.stdout.write(record.render(), ending='')
        if exit_code:
            raise SystemExit(exit_code)

    @staticmethod
    def _checked(result):
        if not result.get('ok'):
            raise CommandError(f"{result['error_type']}: {result['error']}", returncode=2)
        return {key: value for key, value in result.items() if key != 'ok'}

    @staticmethod
    def _attach_labels(results, labels_a, labels_b):
        if labels_a is not None:
            results['labels_a'] = labels_a
        if labels_b is not None:
            results['labels_b'] = labels_b

    def _invariant(self, options):
        image, labels = read_image(options['file'], header=options['header'])
        results = self._checked(ShapeOrbitSDK.describe_image(image, options['full_gram'], options['tol_rank']))
        if labels is not None:
            results['labels'] = labels
        record = ResultRecord(
            command='invariant',
            inputs={'file': options['file']},
            tolerances={'tol_rank': options['tol_rank']},
            results=results,
        )
        return record, 0

    def _compare(self, options):
        first, labels_a = read_image(options['file_a'], header=options['header'])
        second, labels_b = read_image(options['file_b'], header=options['header'])
        results = self._checked(ShapeOrbitSDK.compare_images(
            first, second, options['group'], options['scheme'], options['tol'], options['tol_rank']
        ))
        equivalent = results.pop('equivalent')
        results.pop('group')
        results.pop('scheme')
        results.pop('tol')
        self._attach_labels(results, labels_a, labels_b)
        record = ResultRecord(
            command='compare',
            inputs={'file_a': options['file_a'], 'file_b': options['file_b']},
            group=options['group'],
            scheme=options['scheme'],
            tolerances={'tol': options['tol'], 'tol_rank': options['tol_rank']},
            results=results,
            verdict=equivalent,
        )
        return record, 0 if equivalent else 1

    def _align(self, options):
        first, labels_a = read_image(options['file_a'], header=options['header'])
        second, labels_b = read_image(options['file_b'], header=options['header'])
        results = self._checked(ShapeOrbitSDK.align_images(first, second, options['group']))
        results.pop('group')
        self._attach_labels(results, labels_a, labels_b)
        record = ResultRecord(
            command='align',
            inputs={'file_a': options['file_a'], 'file_b': options['file_b']},
            group=options['group'],
            results=results,
        )
        return record, 0

    def _dist_matrix(self, options):
        paths = read_manifest(options['manifest'])
        images = read_images(paths, header=options['header'])
        results = self._checked(ShapeOrbitSDK.distance_matrix(
            images, options['metric'], options['group'], options['scheme'], options['workers']
        ))
        results.pop('group')
        record = ResultRecord(
            command='dist-matrix',
            inputs={'manifest': options['manifest'], 'images': [str(p) for p in paths]},
            group=options['group'],
            scheme=options['scheme'] if options['group'] == 'similarity' else None,
            results=results,
        )
        return record, 0

    def _gen(self, options):
        try:
            instance = generate_instance(
                options['n'], options['k'], options['seed'], options['transform'], options['noise']
            )
        except ValueError as e:
            raise CommandError(str(e), returncode=2) from e
        out_dir = Path(options['out_dir'])
        prefix, fmt = options['prefix'], options['format']
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            written = {'source': write_image(instance.source, out_dir / f"{prefix}_a.{fmt}", fmt)}
            if instance.target is not None:
                written['target'] = write_image(instance.target, out_dir / f"{prefix}_b.{fmt}", fmt)
                truth_path = out_dir / f"{prefix}_truth.json"
                truth_path.write_text(dumps(instance.truth()) + '\n', encoding='utf-8')
                written['truth'] = truth_path
        except OSError as e:
            raise CommandError(f"Could not write fixtures: {e}", returncode=2) from e
        record = ResultRecord(
            command='gen',
            inputs={
                'n': options['n'], 'k': options['k'], 'seed': options['seed'],
                'transform': options['transform'], 'noise': options['noise'],
            },
            results={'files': {name: str(path) for name, path in written.items()}},
        )
        return record, 0

    def _selftest(self, options):
        results = self._checked(ShapeOrbitSDK.selftest(options['trials'], options['seed']))
        passed = results.pop('passed')
        record = ResultRecord(
            command='selftest',
            inputs={'trials': options['trials'], 'seed': options['seed']},
            results=results,
            verdict=passed,
        )
        return record, 0 if passed else 1
