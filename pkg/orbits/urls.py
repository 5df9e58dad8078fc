from django.urls import path

from . import views

urlpatterns = [
    path('invariant/', views.image_invariant, name='image_invariant'),
    path('compare/', views.compare_images, name='compare_images'),
    path('align/', views.align_images, name='align_images'),
    path('distance/', views.orbit_distance, name='orbit_distance'),
]
