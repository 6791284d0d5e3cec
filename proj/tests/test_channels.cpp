#include <doctest.h>

#include <cmath>

#include "gnm/channels.hpp"
#include "helpers.hpp"

using namespace gnm;

TEST_CASE("channel construction guards") {
    Matrix skew = Matrix::Identity(2, 2);
    skew(0, 1) = 1e-6;
    CHECK_THROWS_AS(GaussianChannel(1, Matrix::Identity(2, 2), skew), InvariantViolationError);
    CHECK_THROWS_AS(GaussianChannel(1, Matrix::Identity(4, 4), Matrix::Zero(4, 4)),
                    InvalidDimensionError);
    Matrix inf = Matrix::Identity(2, 2);
    inf(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(GaussianChannel(1, inf, Matrix::Zero(2, 2)), InvariantViolationError);
}

TEST_CASE("apply") {
    const CovarianceMatrix s1 = two_mode_squeezed(1.0);

    SUBCASE("identity returns the input unchanged") {
        const CovarianceMatrix out = apply(identity_channel(2), s1);
        CHECK((out.data() - s1.data()).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("additive noise on the vacuum") {
        const CovarianceMatrix vac(1, Matrix::Identity(2, 2));
        const CovarianceMatrix out = apply(isotropic_channel(1.0, 0.7), vac);
        CHECK((out.data() - 1.7 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);
    }

    SUBCASE("embedded lossy channel matches the integrated expression") {
        const double tau = 0.5, eta = 1.0;
        const CovarianceMatrix out = apply(embed_local(isotropic_channel(tau, eta), 2, 0), s1);
        const double c = std::cosh(2.0), s = std::sinh(2.0);
        Matrix want = Matrix::Zero(4, 4);
        want.topLeftCorner(2, 2) = (tau * tau * c + eta) * Matrix::Identity(2, 2);
        want.bottomRightCorner(2, 2) = c * Matrix::Identity(2, 2);
        Matrix z = Matrix::Identity(2, 2);
        z(1, 1) = -1.0;
        want.topRightCorner(2, 2) = tau * s * z;
        want.bottomLeftCorner(2, 2) = tau * s * z;
        CHECK((out.data() - want).cwiseAbs().maxCoeff() <= 1e-12);
    }

    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(apply(identity_channel(1), s1), InvalidDimensionError);
    }
}

TEST_CASE("compose") {
    std::mt19937 rng(7);
    const GaussianChannel ch = gnm::testing::random_cptp_single_mode(rng);

    SUBCASE("identity laws") {
        const GaussianChannel left = compose(identity_channel(1), ch);
        const GaussianChannel right = compose(ch, identity_channel(1));
        CHECK((left.transform - ch.transform).cwiseAbs().maxCoeff() == 0.0);
        CHECK((left.noise - ch.noise).cwiseAbs().maxCoeff() == 0.0);
        CHECK((right.transform - ch.transform).cwiseAbs().maxCoeff() == 0.0);
        CHECK((right.noise - ch.noise).cwiseAbs().maxCoeff() <= 1e-15);
    }

    SUBCASE("mode-count mismatches") {
        CHECK_THROWS_AS(compose(identity_channel(2), ch), InvalidDimensionError);
        CHECK_THROWS_AS(intermediate_map(identity_channel(2), ch), InvalidDimensionError);
    }

    SUBCASE("classical noise adds") {
        const GaussianChannel sum =
            compose(isotropic_channel(1.0, 0.8), isotropic_channel(1.0, 0.5));
        CHECK((sum.transform - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((sum.noise - 1.3 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);
    }

    SUBCASE("associativity") {
        for (int it = 0; it < 20; ++it) {
            const GaussianChannel a = gnm::testing::random_channel_single_mode(rng);
            const GaussianChannel b = gnm::testing::random_channel_single_mode(rng);
            const GaussianChannel c = gnm::testing::random_channel_single_mode(rng);
            const GaussianChannel left = compose(compose(a, b), c);
            const GaussianChannel right = compose(a, compose(b, c));
            CHECK((left.transform - right.transform).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((left.noise - right.noise).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("intermediate map") {
    SUBCASE("bridging a map with itself gives the identity") {
        const GaussianChannel ch = isotropic_channel(0.7, 0.4);
        const GaussianChannel mid = intermediate_map(ch, ch);
        CHECK((mid.transform - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK(mid.noise.cwiseAbs().maxCoeff() <= 1e-14);
    }

    SUBCASE("classical noise bridge") {
        const GaussianChannel mid =
            intermediate_map(isotropic_channel(1.0, 1.9), isotropic_channel(1.0, 0.6));
        CHECK((mid.transform - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
        CHECK((mid.noise - 1.3 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
    }

    SUBCASE("lossy bridge parameters") {
        const double tau_s = 0.8, eta_s = 0.3, tau_t = 0.5, eta_t = 0.7;
        const GaussianChannel mid =
            intermediate_map(isotropic_channel(tau_t, eta_t), isotropic_channel(tau_s, eta_s));
        const double tau_ts = tau_t / tau_s;
        CHECK(mid.transform(0, 0) == doctest::Approx(tau_ts).epsilon(1e-14));
        CHECK(mid.noise(0, 0) ==
              doctest::Approx(eta_t - eta_s * tau_ts * tau_ts).epsilon(1e-13));
    }

    SUBCASE("round trip reproduces the later channel") {
        std::mt19937 rng(11);
        for (int it = 0; it < 50; ++it) {
            GaussianChannel earlier = gnm::testing::random_channel_single_mode(rng);
            if (std::abs(earlier.transform.determinant()) < 0.05) continue;
            const GaussianChannel later = gnm::testing::random_channel_single_mode(rng);
            const GaussianChannel mid = intermediate_map(later, earlier);
            const GaussianChannel back = compose(mid, earlier);
            CHECK((back.transform - later.transform).cwiseAbs().maxCoeff() <= 1e-10);
            CHECK((back.noise - later.noise).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }

    SUBCASE("singular earlier transform") {
        Matrix t = Matrix::Zero(2, 2);
        t(0, 0) = 1.0;
        const GaussianChannel degenerate(1, t, Matrix::Zero(2, 2));
        CHECK_THROWS_AS(intermediate_map(identity_channel(1), degenerate),
                        NonInvertibleEvolutionError);
    }
}

TEST_CASE("CPTP predicate") {
    CHECK(is_cptp(identity_channel(1)));
    CHECK(is_cptp(identity_channel(3)));
    CHECK_FALSE(is_cptp(isotropic_channel(1.0, -0.1)));

    // (0.5 I, eta I) is CPTP iff eta >= |det T - 1| = 0.75
    CHECK_FALSE(is_cptp(isotropic_channel(0.5, 0.749)));
    CHECK(is_cptp(isotropic_channel(0.5, 0.75)));
    CHECK(is_cptp(isotropic_channel(0.5, 0.751)));

    SUBCASE("general condition agrees with the single-mode closed form") {
        std::mt19937 rng(23);
        for (int it = 0; it < 10000; ++it) {
            const GaussianChannel ch = gnm::testing::random_channel_single_mode(rng);
            CHECK(is_cptp(ch) == is_cptp_single_mode(ch));
        }
    }
}

TEST_CASE("local embedding") {
    const GaussianChannel ch = isotropic_channel(0.6, 0.9);

    SUBCASE("block structure") {
        const GaussianChannel em = embed_local(ch, 3, 0);
        CHECK(em.modes == 3);
        CHECK((em.transform.topLeftCorner(2, 2) - ch.transform).cwiseAbs().maxCoeff() == 0.0);
        CHECK((em.transform.bottomRightCorner(4, 4) - Matrix::Identity(4, 4))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
        CHECK((em.noise.topLeftCorner(2, 2) - ch.noise).cwiseAbs().maxCoeff() == 0.0);
        CHECK(em.noise.bottomRightCorner(4, 4).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("embedding the identity is the identity") {
        const GaussianChannel em = embed_local(identity_channel(1), 3, 1);
        CHECK((em.transform - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
        CHECK(em.noise.cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("non-target blocks of a product state are untouched") {
        Matrix prod = Matrix::Zero(6, 6);
        prod.block(0, 0, 2, 2) = 1.5 * Matrix::Identity(2, 2);
        prod.block(2, 2, 2, 2) = 2.5 * Matrix::Identity(2, 2);
        prod.block(4, 4, 2, 2) = 3.5 * Matrix::Identity(2, 2);
        const CovarianceMatrix out = apply(embed_local(ch, 3, 1), CovarianceMatrix(3, prod));
        CHECK((out.data().block(0, 0, 2, 2) - prod.block(0, 0, 2, 2)).cwiseAbs().maxCoeff() ==
              0.0);
        CHECK((out.data().block(4, 4, 2, 2) - prod.block(4, 4, 2, 2)).cwiseAbs().maxCoeff() ==
              0.0);
        CHECK(out.data()(2, 2) == doctest::Approx(0.6 * 0.6 * 2.5 + 0.9).epsilon(1e-14));
    }

    SUBCASE("target out of range") {
        CHECK_THROWS_AS(embed_local(ch, 3, 3), IndexError);
        CHECK_THROWS_AS(embed_local(ch, 3, -1), IndexError);
    }
}

TEST_CASE("incompatibility breaking") {
    // classical noise: GIB iff eta >= 1
    CHECK_FALSE(is_gib(isotropic_channel(1.0, 0.999)));
    CHECK(is_gib(isotropic_channel(1.0, 1.0)));
    CHECK(is_gib(isotropic_channel(1.0, 1.5)));
    // lossy: GIB iff eta >= tau^2
    CHECK_FALSE(is_gib(isotropic_channel(0.6, 0.35)));
    CHECK(is_gib(isotropic_channel(0.6, 0.36)));
    // a local embedding is never GIB
    CHECK_FALSE(is_gib(embed_local(isotropic_channel(1.0, 5.0), 2, 0)));
    CHECK_FALSE(is_gib(embed_local(isotropic_channel(0.3, 9.0), 3, 0)));
}

TEST_CASE("entanglement breaking") {
    // classical noise: EB iff eta >= 2
    CHECK_FALSE(is_eb(isotropic_channel(1.0, 1.999)));
    CHECK(is_eb(isotropic_channel(1.0, 2.0)));
    // lossy with tau = 0.5: EB iff eta >= 1.25
    CHECK_FALSE(is_eb(isotropic_channel(0.5, 1.249)));
    CHECK(is_eb(isotropic_channel(0.5, 1.25)));
    CHECK_FALSE(is_eb(identity_channel(1)));
    // a local embedding is never EB
    CHECK_FALSE(is_eb(embed_local(isotropic_channel(1.0, 50.0), 2, 0)));
    // multimode channels without an untouched mode are unsupported
    const GaussianChannel two(2, 0.9 * Matrix::Identity(4, 4), 0.1 * Matrix::Identity(4, 4));
    CHECK_THROWS_AS(is_eb(two), UnsupportedChannelError);

    SUBCASE("PPT probe agrees with the closed form off the boundary") {
        // perturb tau so the isotropic fast path is not taken
        auto nearly = [](double tau, double eta) {
            Matrix t = tau * Matrix::Identity(2, 2);
            t(0, 0) += 1e-6;
            return GaussianChannel(1, t, eta * Matrix::Identity(2, 2));
        };
        CHECK(is_eb(nearly(0.5, 1.4)));
        CHECK_FALSE(is_eb(nearly(0.5, 1.1)));
        CHECK_THROWS_AS(is_eb(nearly(0.5, 1.4), /*allow_numerical_proxy=*/false),
                        UnsupportedChannelError);
    }
}

TEST_CASE("EB implies GIB on random isotropic channels") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> utau(0.05, 1.5), ueta(0.0, 6.0);
    int eb_seen = 0;
    for (int it = 0; it < 500; ++it) {
        const GaussianChannel ch = isotropic_channel(utau(rng), ueta(rng));
        if (is_eb(ch)) {
            ++eb_seen;
            CHECK(is_gib(ch));
        }
    }
    CHECK(eb_seen > 50);  // the sample actually exercises the implication
}
