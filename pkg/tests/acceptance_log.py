"""Shared record of acceptance-criterion outcomes, printed in the pytest summary."""

RESULTS: dict = {}
