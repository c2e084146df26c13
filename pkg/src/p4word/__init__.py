"""p4word: the P4 numeration system and the ternary word p.

Submodules:
    numeration  exact greedy representations and arithmetic oracles
    automata    DFA/DFAO kernel, text format, minimization, regexes
    linrep      exact-rational linear representations of sequences
    learner     guess-and-verify automaton synthesis from oracles
    word        morphic generation and indexed access for p
    analysis    brute-force checks of every quantitative property of p
    acceptance  the gating check suite
    cli         command-line front end (installed as `p4`)
"""

__version__ = "0.1.0"
