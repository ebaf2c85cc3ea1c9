from larchfit.cli import run

run()
