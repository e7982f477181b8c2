"""Test suite for the rectgeo package."""
