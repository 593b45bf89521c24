"""HTTP service wrapping the precoding library."""
