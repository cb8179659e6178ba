from dpnoise.cli import run

run()
