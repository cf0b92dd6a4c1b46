"""Service layer: JSON file persistence, live play sessions, cached analysis
jobs, the HTTP API and the command line entry points."""
