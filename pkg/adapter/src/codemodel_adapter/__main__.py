import argparse
import sys

from . import ToyCodeModel, load_weights, serve


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="codemodel-adapter",
        description="Serve raw model activations over stdin/stdout (JSON lines).",
    )
    parser.add_argument("--seed", type=int, default=20240, help="weight init seed")
    parser.add_argument("--weights", help="load externally trained weights (.npz)")
    parser.add_argument("--vocab", type=int, default=1024)
    parser.add_argument("--embed-dim", type=int, default=64)
    args = parser.parse_args(argv)

    weights = load_weights(args.weights) if args.weights else None
    model = ToyCodeModel(
        vocab_size=args.vocab, embed_dim=args.embed_dim, seed=args.seed, weights=weights
    )
    serve(model)
    return 0


if __name__ == "__main__":
    sys.exit(main())
