import numpy as np
from django.test import SimpleTestCase, override_settings

from orbits.equivalence import (
    Group,
    Metric,
    align,
    distance_matrix,
    motion_equivalent,
    orbit_distance,
    orbit_distance_gram,
    orbit_distance_procrustes,
    proper_motion_equivalent,
    similarity_equivalent,
)
from orbits.exceptions import DegenerateImage, ShapeMismatch
from orbits.geometry import LabeledImage, act_on_image, random_motion, reflection

TRIANGLE = LabeledImage([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]])
MIRRORED = act_on_image(reflection(2), TRIANGLE)


def padded(image):
    return LabeledImage(np.hstack([image.points, np.zeros((image.n, 1))]))


class MotionEquivalenceTests(SimpleTestCase):
    def test_random_motions_are_equivalent(self):
        rng = np.random.default_rng(100)
        for _ in range(500):
            n, k = int(rng.integers(1, 9)), int(rng.integers(1, 6))
            image = LabeledImage(rng.standard_normal((n, k)))
            self.assertTrue(motion_equivalent(image, act_on_image(random_motion(k, rng), image), 1e-8))

    def test_perturbed_coordinate_is_rejected(self):
        image = LabeledImage([[-0.5, 0.0], [0.5, 0.0], [0.0, 0.5]])
        points = image.points.copy()
        points[2, 1] += 0.1
        self.assertFalse(motion_equivalent(image, LabeledImage(points), 1e-8))

    def test_image_is_equivalent_to_itself(self):
        self.assertTrue(motion_equivalent(TRIANGLE, TRIANGLE))

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeMismatch):
            motion_equivalent(TRIANGLE, LabeledImage([[0.0, 0.0], [1.0, 0.0]]))
        with self.assertRaises(ShapeMismatch):
            motion_equivalent(TRIANGLE, padded(TRIANGLE))

    @override_settings(ORBITS={'TOL_EQ': 1.0})
    def test_tolerance_comes_from_settings(self):
        nearby = LabeledImage(TRIANGLE.points + np.array([[0.0, 0.0], [0.01, 0.0], [0.0, 0.0]]))
        self.assertTrue(motion_equivalent(TRIANGLE, nearby))


class ChiralityTests(SimpleTestCase):
    def test_mirrored_planar_triangle(self):
        self.assertTrue(motion_equivalent(TRIANGLE, MIRRORED))
        self.assertFalse(proper_motion_equivalent(TRIANGLE, MIRRORED))

    def test_mirror_becomes_proper_in_three_dimensions(self):
        self.assertTrue(proper_motion_equivalent(padded(TRIANGLE), padded(MIRRORED)))

    def test_rotation_is_proper(self):
        rng = np.random.default_rng(7)
        g = random_motion(2, rng, proper=True)
        self.assertTrue(proper_motion_equivalent(TRIANGLE, act_on_image(g, TRIANGLE)))

    def test_collinear_points_can_always_be_rotated(self):
        segment = LabeledImage([[0.0, 0.0], [1.0, 1.0], [3.0, 3.0]])
        self.assertTrue(proper_motion_equivalent(segment, act_on_image(reflection(2), segment)))


class SimilarityEquivalenceTests(SimpleTestCase):
    def test_scaled_motions_are_equivalent(self):
        rng = np.random.default_rng(200)
        for _ in range(100):
            image = LabeledImage(rng.standard_normal((int(rng.integers(2, 8)), int(rng.integers(1, 5)))))
            a = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
            other = act_on_image(random_motion(image.k, rng), image.scaled(a))
            for scheme in ('max', 'mean', 'gmean'):
                self.assertTrue(similarity_equivalent(image, other, scheme, 1e-8))

    def test_different_axis_ratios_are_rejected(self):
        wide = LabeledImage([[2.0, 0.0], [-2.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        wider = LabeledImage([[3.0, 0.0], [-3.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        self.assertFalse(similarity_equivalent(wide, wider))

    def test_image_is_similar_to_itself(self):
        self.assertTrue(similarity_equivalent(TRIANGLE, TRIANGLE))

    def test_degenerate_image(self):
        point = LabeledImage([[1.0, 1.0], [1.0, 1.0]])
        with self.assertRaises(DegenerateImage):
            similarity_equivalent(point, point)


class AlignmentTests(SimpleTestCase):
    def test_recovers_random_motion(self):
        rng = np.random.default_rng(300)
        for _ in range(100):
            n, k = int(rng.integers(1, 9)), int(rng.integers(1, 6))
            first = LabeledImage(rng.standard_normal((n, k)))
            second = act_on_image(random_motion(k, rng), first)
            result = align(first, second, Group.MOTION)
            bound = 1e-9 * (1.0 + np.linalg.norm(first.points))
            self.assertLessEqual(result.residual, bound)
            np.testing.assert_allclose(result.apply(first).points, second.points, atol=1e-9)

    def test_segment_rotated_by_quarter_turn(self):
        first = LabeledImage([[1.0, 0.0], [-1.0, 0.0]])
        second = LabeledImage([[0.0, 1.0], [0.0, -1.0]])
        result = align(first, second, Group.MOTION)
        self.assertLess(result.residual, 1e-12)
        proper = align(first, second, Group.PROPER_MOTION)
        self.assertTrue(proper.transform.proper)
        self.assertLess(proper.residual, 1e-12)

    def test_mirror_needs_a_reflection(self):
        self.assertLess(align(TRIANGLE, MIRRORED, Group.MOTION).residual, 1e-12)
        self.assertFalse(align(TRIANGLE, MIRRORED, Group.MOTION).transform.proper)
        proper = align(TRIANGLE, MIRRORED, Group.PROPER_MOTION)
        self.assertTrue(proper.transform.proper)
        self.assertGreater(proper.residual, 0.5)

    def test_similarity_recovers_scale(self):
        rng = np.random.default_rng(301)
        first = LabeledImage(rng.standard_normal((6, 3)))
        second = act_on_image(random_motion(3, rng), first.scaled(2.5))
        result = align(first, second, Group.SIMILARITY)
        self.assertAlmostEqual(result.scale, 2.5, places=10)
        self.assertLess(result.residual, 1e-9)

    def test_similarity_rejects_coincident_points(self):
        point = LabeledImage([[1.0, 2.0], [1.0, 2.0]])
        with self.assertRaises(DegenerateImage):
            align(point, LabeledImage([[0.0, 0.0], [1.0, 0.0]]), Group.SIMILARITY)

    def test_similarity_of_uncorrelated_images_shrinks_to_the_centroid(self):
        first = LabeledImage([[-1.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
        second = LabeledImage([[0.0, 1.0], [0.0, 1.0], [0.0, -2.0]])
        result = align(first, second, Group.SIMILARITY)
        self.assertEqual(result.scale, 0.0)
        self.assertAlmostEqual(result.residual, np.sqrt(6.0), places=12)
        np.testing.assert_allclose(result.apply(first).points, np.zeros((3, 2)), atol=1e-15)
        self.assertFalse(similarity_equivalent(first, second))
        self.assertAlmostEqual(
            orbit_distance_procrustes(first, second, Group.SIMILARITY).value, np.sqrt(6.0), places=12
        )

    def test_shape_mismatch(self):
        with self.assertRaises(ShapeMismatch):
            align(TRIANGLE, padded(TRIANGLE))


class DistanceTests(SimpleTestCase):
    def test_gram_distance_of_scaled_segment(self):
        first = LabeledImage([[-1.0, 0.0], [1.0, 0.0]])
        value = orbit_distance_gram(first, first.scaled(2.0))
        self.assertAlmostEqual(value.value, 6.0, places=12)
        self.assertIs(value.kind, Metric.GRAM_FROBENIUS)

    def test_equivalent_pair_is_at_distance_zero(self):
        rng = np.random.default_rng(400)
        first = LabeledImage(rng.standard_normal((5, 3)))
        second = act_on_image(random_motion(3, rng), first)
        self.assertLess(orbit_distance_gram(first, second).value, 1e-9)
        self.assertLess(orbit_distance_procrustes(first, second, Group.MOTION).value, 1e-9)

    def test_gram_distance_ignores_motions_on_either_side(self):
        rng = np.random.default_rng(401)
        for _ in range(100):
            n = int(rng.integers(1, 8))
            first = LabeledImage(rng.standard_normal((n, int(rng.integers(1, 5)))))
            second = LabeledImage(rng.standard_normal((n, int(rng.integers(1, 5)))))
            moved_first = act_on_image(random_motion(first.k, rng), first)
            moved_second = act_on_image(random_motion(second.k, rng), second)
            self.assertAlmostEqual(
                orbit_distance_gram(moved_first, moved_second).value,
                orbit_distance_gram(first, second).value,
                delta=1e-9,
            )

    def test_procrustes_distance_is_symmetric(self):
        rng = np.random.default_rng(402)
        for _ in range(100):
            shape = (int(rng.integers(1, 8)), int(rng.integers(1, 5)))
            first, second = LabeledImage(rng.standard_normal(shape)), LabeledImage(rng.standard_normal(shape))
            self.assertAlmostEqual(
                orbit_distance_procrustes(first, second, Group.MOTION).value,
                orbit_distance_procrustes(second, first, Group.MOTION).value,
                delta=1e-9,
            )

    def test_gram_distance_across_dimensions(self):
        self.assertLess(orbit_distance_gram(TRIANGLE, padded(TRIANGLE)).value, 1e-12)

    def test_mirror_distances(self):
        self.assertLess(orbit_distance_procrustes(TRIANGLE, MIRRORED, Group.MOTION).value, 1e-12)
        self.assertGreater(orbit_distance_procrustes(TRIANGLE, MIRRORED, Group.PROPER_MOTION).value, 0.5)

    def test_gram_metric_ignores_orientation(self):
        value = orbit_distance(TRIANGLE, MIRRORED, Metric.GRAM_FROBENIUS, Group.PROPER_MOTION)
        self.assertIs(value.group_tag, Group.MOTION)
        self.assertLess(value.value, 1e-12)

    def test_similarity_distance_ignores_scale(self):
        self.assertLess(orbit_distance(TRIANGLE, TRIANGLE.scaled(4.0), 'gram', 'similarity').value, 1e-12)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(500)
        for _ in range(200):
            n = int(rng.integers(1, 7))
            a, b, c = (LabeledImage(rng.standard_normal((n, int(rng.integers(1, 5))))) for _ in range(3))
            d = lambda x, y: orbit_distance_gram(x, y).value
            self.assertEqual(d(a, b), d(b, a))
            self.assertLessEqual(d(a, b), d(a, c) + d(c, b) + 1e-12)

    def test_gram_distance_needs_matching_point_counts(self):
        with self.assertRaises(ShapeMismatch):
            orbit_distance_gram(TRIANGLE, LabeledImage([[0.0, 0.0], [1.0, 0.0]]))


class DistanceMatrixTests(SimpleTestCase):
    def test_single_image(self):
        np.testing.assert_array_equal(distance_matrix([TRIANGLE]), [[0.0]])

    def test_duplicate_images(self):
        matrix = distance_matrix([TRIANGLE, TRIANGLE], Metric.PROCRUSTES, Group.MOTION)
        np.testing.assert_allclose(matrix, np.zeros((2, 2)), atol=1e-12)

    def test_symmetric_and_triangle_inequality(self):
        rng = np.random.default_rng(600)
        images = [LabeledImage(rng.standard_normal((4, 2))) for _ in range(5)]
        for metric in Metric:
            matrix = distance_matrix(images, metric, Group.MOTION, workers=3)
            np.testing.assert_array_equal(matrix, matrix.T)
            np.testing.assert_array_equal(np.diag(matrix), np.zeros(5))
            for i in range(5):
                for j in range(5):
                    for k in range(5):
                        self.assertLessEqual(matrix[i, j], matrix[i, k] + matrix[k, j] + 1e-9)

    def test_worker_count_does_not_change_the_result(self):
        rng = np.random.default_rng(601)
        images = [LabeledImage(rng.standard_normal((5, 3))) for _ in range(6)]
        np.testing.assert_array_equal(
            distance_matrix(images, workers=1), distance_matrix(images, workers=4)
        )

    def test_mixed_point_counts(self):
        with self.assertRaises(ShapeMismatch):
            distance_matrix([TRIANGLE, LabeledImage([[0.0, 0.0], [1.0, 0.0]])])
