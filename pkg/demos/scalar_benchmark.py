"""The one-dimensional benchmark, worked end to end.

A single damped mode coupled to a single conserved one:

    u' = -u + v,   v' = -u

i.e. unit damping and unit coupling.  Everything about this system is
computable by hand, which makes it the reference point for the whole
package: the generator's eigenvalues solve x^2 + x + 1 = 0 (real part
-1/2), and the resolvent norm on the imaginary axis peaks at the golden
ratio.

Run:  python demos/scalar_benchmark.py
"""

import numpy as np

import stabcert as sc


def main():
    system = sc.validate_system([[1.0]], [[1.0]], [[1.0]], [[1.0]])
    print("validated scalar system: c_alpha=%.3g c_gamma=%.3g" % (system.c_alpha, system.c_gamma))

    B = sc.assemble_generator(np.array([[1.0 + 0j]]), np.array([[1.0 + 0j]]))
    print("\ngenerator:\n", B.real)

    print("\nspectral abscissa (oracle):   %.6f" % sc.spectral_abscissa(B))
    print("resolvent norm at z = 0:      %.6f" % sc.resolvent_norm(B, 0.0))
    print("golden ratio (1 + sqrt 5)/2:  %.6f" % ((1 + np.sqrt(5)) / 2))

    sweep = sc.gp_sweep(B, 0.0, 10.0, 201)
    print("\nimaginary-axis sweep: max %.6f at lambda = %.3f, %d singular points"
          % (sweep.max_norm, sweep.lambdas[int(np.argmax(sweep.norms))], sweep.n_singular))

    trace = sc.simulate(B, np.array([1.0, 0.0], dtype=complex), 20.0, 2001)
    rate = sc.fit_decay_rate(trace)
    print("fitted decay rate over the trailing half window: %.4f (exact: 0.5)" % rate)

    cert = sc.full_certificate(system)
    print("\ncertificate: decay rate >= %.4f with resolvent bound %.2f" % (cert.delta_cert, cert.M_total))
    print("  shift delta* = %.4f, Young parameter p* = %.4f, margin d = %.4f"
          % (cert.inner.delta_star, cert.inner.p_star, cert.inner.d))
    print("  certified rate is conservative, as it must be: %.4f <= 0.5" % cert.delta_cert)


if __name__ == "__main__":
    main()
