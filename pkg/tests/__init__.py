"""Tests for the permissible-walks package."""
