"""Tests for the cmlt package."""
