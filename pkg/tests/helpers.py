from cevgreeks import DEFAULT_PARAMS, ModelParams

# kappa = 1, theta = 0.5 variant used in hand-computed reference values
HAND = ModelParams(x=100.0, nu0=0.04, r=0.02, kappa=1.0, mu=0.04, theta=0.5, gamma=0.75, rho=-0.5, T=1.0)
# vanishing vol-of-vol: the Black-Scholes limit
FLAT = DEFAULT_PARAMS.replace(theta=1e-8, nu0=0.04, mu=0.04)

ACCEPTANCE_LINES = []


def report(label, ok, detail):
    line = f"{label} {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok
