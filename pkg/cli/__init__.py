"""Command-line front end: encrypt, decrypt, render and analyze."""
