"""Print the stored belief-function quotient that does not reduce to a mass function."""

from sepval.structure import belief_witness_report

if __name__ == "__main__":
    rep, text = belief_witness_report()
    print(text)
    print(rep.to_text())
