"""Check the Leavitt relations for the binary model and the L(1,n) words
over windows {0, ..., 2^m - 1}."""
import argparse

from folnerlab.leavitt import binary_model, embed_L1n_in_L12, leavitt_relation_check, nary_window, realize_words


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--m", type=int, default=12)
    p.add_argument("--n", type=int, nargs="+", default=[2, 3, 5])
    args = p.parse_args()
    model = binary_model()
    for m in range(args.m + 1):
        rep = leavitt_relation_check(model, 2, nary_window(2, m))
        print(f"binary m={m}: {'pass' if rep.passed else 'FAIL'}")
    for n in args.n:
        emb = embed_L1n_in_L12(n)
        rep = leavitt_relation_check(realize_words(emb, model), n, nary_window(2, args.m))
        print(f"L(1,{n}) word lengths {emb.lengths()}: {'pass' if rep.passed else 'FAIL'}")


if __name__ == "__main__":
    main()
