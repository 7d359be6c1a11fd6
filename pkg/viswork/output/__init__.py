"""Text, JSON, CSV and SVG encoders for run results."""
