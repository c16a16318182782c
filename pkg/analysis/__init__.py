"""Statistical security analysis of plain and encrypted images."""
