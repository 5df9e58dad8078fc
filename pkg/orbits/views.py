from drf_yasg import openapi
from drf_yasg.utils import swagger_auto_schema
from rest_framework import status
from rest_framework.decorators import api_view, permission_classes
from rest_framework.permissions import AllowAny
from rest_framework.response import Response

from .exceptions import ParseError
from .imagefiles import points_to_image
from .records import _make_serializable
from .sdk import ShapeOrbitSDK

POINTS_SCHEMA = openapi.Schema(
    type=openapi.TYPE_ARRAY,
    description='n labeled points, each an array of k coordinates',
    items=openapi.Schema(type=openapi.TYPE_ARRAY, items=openapi.Schema(type=openapi.TYPE_NUMBER)),
    example=[[0, 0], [1, 0], [0, 2]],
)
GROUP_SCHEMA = openapi.Schema(
    type=openapi.TYPE_STRING,
    enum=['motion', 'proper', 'similarity'],
    description='Transformation group (default: motion)',
)
SCHEME_SCHEMA = openapi.Schema(
    type=openapi.TYPE_STRING,
    enum=['max', 'mean', 'gmean'],
    description='Similarity normalization scheme (default: gmean)',
)
ERROR_RESPONSE = openapi.Response(
    description='Invalid request or incompatible images',
    schema=openapi.Schema(
        type=openapi.TYPE_OBJECT,
        properties={
            'ok': openapi.Schema(type=openapi.TYPE_BOOLEAN, example=False),
            'error': openapi.Schema(type=openapi.TYPE_STRING),
            'error_type': openapi.Schema(type=openapi.TYPE_STRING, example='ShapeMismatch'),
        }
    )
)


def _body(request):
    if not isinstance(request.data, dict):
        raise ParseError("request body must be a JSON object")
    return request.data


def _image_from(data, key):
    if key not in data:
        raise ParseError(f"{key} is required")
    return points_to_image(data[key], path=key)


def _respond(result):
    status_code = status.HTTP_200_OK if result.get('ok') else status.HTTP_400_BAD_REQUEST
    return Response(_make_serializable(result), status=status_code)


def _bad_request(error):
    return Response(
        {'ok': False, 'error': str(error), 'error_type': type(error).__name__},
        status=status.HTTP_400_BAD_REQUEST
    )


@swagger_auto_schema(
    method='post',
    operation_description='Centroid, ellipsoid axis lengths, multiplicity blocks and rank of one image.',
    request_body=openapi.Schema(
        type=openapi.TYPE_OBJECT,
        required=['points'],
        properties={
            'points': POINTS_SCHEMA,
            'full_gram': openapi.Schema(type=openapi.TYPE_BOOLEAN, description='Include the n×n Gram matrix'),
        }
    ),
    responses={
        200: openapi.Response(
            description='Invariant computed',
            schema=openapi.Schema(
                type=openapi.TYPE_OBJECT,
                properties={
                    'ok': openapi.Schema(type=openapi.TYPE_BOOLEAN, example=True),
                    'axis_lengths': openapi.Schema(
                        type=openapi.TYPE_ARRAY, items=openapi.Schema(type=openapi.TYPE_NUMBER)
                    ),
                    'rank': openapi.Schema(type=openapi.TYPE_INTEGER),
                }
            )
        ),
        400: ERROR_RESPONSE,
    },
    tags=['Orbit Invariants']
)
@api_view(['POST'])
@permission_classes([AllowAny])
def image_invariant(request):
    """POST endpoint returning the motion invariant of an image."""
    try:
        data = _body(request)
        image = _image_from(data, 'points')
    except ParseError as e:
        return _bad_request(e)
    result = ShapeOrbitSDK.describe_image(image, full_gram=bool(data.get('full_gram', False)))
    return _respond(result)


@swagger_auto_schema(
    method='post',
    operation_description='Decide whether two images lie in the same orbit of the chosen group.',
    request_body=openapi.Schema(
        type=openapi.TYPE_OBJECT,
        required=['points_a', 'points_b'],
        properties={
            'points_a': POINTS_SCHEMA,
            'points_b': POINTS_SCHEMA,
            'group': GROUP_SCHEMA,
            'scheme': SCHEME_SCHEMA,
            'tol': openapi.Schema(type=openapi.TYPE_NUMBER, description='Relative tolerance (default 1e-8)'),
        }
    ),
    responses={
        200: openapi.Response(
            description='Comparison made',
            schema=openapi.Schema(
                type=openapi.TYPE_OBJECT,
                properties={
                    'ok': openapi.Schema(type=openapi.TYPE_BOOLEAN, example=True),
                    'equivalent': openapi.Schema(type=openapi.TYPE_BOOLEAN),
                    'gram_distance': openapi.Schema(type=openapi.TYPE_NUMBER),
                    'procrustes_distance': openapi.Schema(type=openapi.TYPE_NUMBER),
                }
            )
        ),
        400: ERROR_RESPONSE,
    },
    tags=['Orbit Equivalence']
)
@api_view(['POST'])
@permission_classes([AllowAny])
def compare_images(request):
    """POST endpoint comparing two images."""
    try:
        data = _body(request)
        first = _image_from(data, 'points_a')
        second = _image_from(data, 'points_b')
        tol = float(data['tol']) if 'tol' in data else None
    except (ParseError, TypeError, ValueError, OverflowError) as e:
        return _bad_request(e)
    result = ShapeOrbitSDK.compare_images(
        first, second, data.get('group'), data.get('scheme'), tol
    )
    return _respond(result)


@swagger_auto_schema(
    method='post',
    operation_description='Recover the rotation, translation (and scale) carrying image A onto image B.',
    request_body=openapi.Schema(
        type=openapi.TYPE_OBJECT,
        required=['points_a', 'points_b'],
        properties={
            'points_a': POINTS_SCHEMA,
            'points_b': POINTS_SCHEMA,
            'group': GROUP_SCHEMA,
        }
    ),
    responses={
        200: openapi.Response(
            description='Alignment found',
            schema=openapi.Schema(
                type=openapi.TYPE_OBJECT,
                properties={
                    'ok': openapi.Schema(type=openapi.TYPE_BOOLEAN, example=True),
                    'rotation': openapi.Schema(type=openapi.TYPE_ARRAY, items=openapi.Schema(
                        type=openapi.TYPE_ARRAY, items=openapi.Schema(type=openapi.TYPE_NUMBER)
                    )),
                    'translation': openapi.Schema(
                        type=openapi.TYPE_ARRAY, items=openapi.Schema(type=openapi.TYPE_NUMBER)
                    ),
                    'scale': openapi.Schema(type=openapi.TYPE_NUMBER),
                    'residual': openapi.Schema(type=openapi.TYPE_NUMBER),
                }
            )
        ),
        400: ERROR_RESPONSE,
    },
    tags=['Orbit Equivalence']
)
@api_view(['POST'])
@permission_classes([AllowAny])
def align_images(request):
    """POST endpoint aligning image A onto image B."""
    try:
        data = _body(request)
        first = _image_from(data, 'points_a')
        second = _image_from(data, 'points_b')
    except ParseError as e:
        return _bad_request(e)
    return _respond(ShapeOrbitSDK.align_images(first, second, data.get('group')))


@swagger_auto_schema(
    method='post',
    operation_description='Orbit distance between two images (Gram-Frobenius or Procrustes residual).',
    request_body=openapi.Schema(
        type=openapi.TYPE_OBJECT,
        required=['points_a', 'points_b'],
        properties={
            'points_a': POINTS_SCHEMA,
            'points_b': POINTS_SCHEMA,
            'metric': openapi.Schema(type=openapi.TYPE_STRING, enum=['gram', 'procrustes']),
            'group': GROUP_SCHEMA,
            'scheme': SCHEME_SCHEMA,
        }
    ),
    responses={
        200: openapi.Response(
            description='Distance computed',
            schema=openapi.Schema(
                type=openapi.TYPE_OBJECT,
                properties={
                    'ok': openapi.Schema(type=openapi.TYPE_BOOLEAN, example=True),
                    'metric': openapi.Schema(type=openapi.TYPE_STRING),
                    'value': openapi.Schema(type=openapi.TYPE_NUMBER),
                }
            )
        ),
        400: ERROR_RESPONSE,
    },
    tags=['Orbit Metrics']
)
@api_view(['POST'])
@permission_classes([AllowAny])
def orbit_distance(request):
    """POST endpoint measuring the distance between two orbits."""
    try:
        data = _body(request)
        first = _image_from(data, 'points_a')
        second = _image_from(data, 'points_b')
    except ParseError as e:
        return _bad_request(e)
    result = ShapeOrbitSDK.distance(
        first, second, data.get('metric', 'gram'), data.get('group'), data.get('scheme')
    )
    return _respond(result)
