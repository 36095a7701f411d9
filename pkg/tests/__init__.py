"""Tests for the daisy-chain scheduler."""
