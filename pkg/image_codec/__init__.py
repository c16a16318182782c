"""PGM and PNG image files and the binary cipher container."""
