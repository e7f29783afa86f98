"""
Level-based runtime analysis workbench for non-elitist genetic algorithms.

core -> problems -> levels -> operators -> engine -> theory -> experiment_runner
"""
