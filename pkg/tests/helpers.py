from kconvex.spline import InequalityProblem


def make_problem(args, weights, k, domain=None):
    return InequalityProblem.from_pairs(zip(args, weights), k, domain)
