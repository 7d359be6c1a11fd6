"""Full-memory reference implementation used as ground truth."""
