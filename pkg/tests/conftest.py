def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import SUMMARY
    except ImportError:
        return
    if not SUMMARY:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(SUMMARY):
        terminalreporter.write_line(SUMMARY[number].line())
