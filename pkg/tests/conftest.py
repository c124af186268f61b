from _report import summary


def pytest_terminal_summary(terminalreporter):
    lines = summary()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
