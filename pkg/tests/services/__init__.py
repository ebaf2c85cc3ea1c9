"""Tests for service modules."""