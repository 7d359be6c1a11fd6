"""Seeded polygon families for tests and benchmarks."""
