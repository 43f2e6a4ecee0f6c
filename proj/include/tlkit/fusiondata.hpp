#pragma once

#include "tlkit/errors.hpp"
#include "tlkit/linalg.hpp"
#include "tlkit/scalar.hpp"
#include "tlkit/tlcat.hpp"

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

// Fusion rings of the semisimple quotients A_{kappa-1} (labels 0..kappa-2),
// their modular data S/T in Cyclotomic(4*kappa), and the modularity and
// transparency diagnostics.

namespace tlkit {

struct FusionRing {
    unsigned kappa = 0;
    std::vector<int> labels;
    std::vector<std::vector<std::vector<int>>> N;  // N[m][n][k] in {0,1}
};

/// Truncated Clebsch-Gordan fusion; kappa = 0 means generic (no truncation).
inline std::vector<int> fusion(int m, int n, unsigned kappa) {
    return fusion_labels(m, n, static_cast<int>(kappa));
}

inline FusionRing fusion_ring(unsigned kappa) {
    if (kappa < 3) throw DomainError("fusion_ring: kappa >= 3 required");
    FusionRing R;
    R.kappa = kappa;
    const int L = static_cast<int>(kappa) - 1;
    for (int k = 0; k < L; ++k) R.labels.push_back(k);
    R.N.assign(static_cast<std::size_t>(L),
               std::vector<std::vector<int>>(static_cast<std::size_t>(L),
                                             std::vector<int>(static_cast<std::size_t>(L), 0)));
    for (int m = 0; m < L; ++m)
        for (int n = 0; n < L; ++n)
            for (int k : fusion(m, n, kappa))
                R.N[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] = 1;
    return R;
}

/// The hosting field for S and T: Cyclotomic(4*kappa), where q is the
/// designated primitive 2*kappa-th root and v = sqrt(q) exists so that all
/// four braiding units are representable.
inline CycloDomain modular_domain(unsigned kappa) {
    if (kappa < 3) throw DomainError("modular_domain: kappa >= 3 required");
    return CycloDomain::make(2 * kappa).with_sqrt_q();
}

struct ModularData {
    unsigned kappa = 0;
    CycloDomain dom;
    NFElem a;
    DenseMatrix<NFElem> S;   // s_{m,n} = (-1)^{m+n} [(m+1)(n+1)]_q
    std::vector<NFElem> T;   // theta_n = (-a)^{n(n+2)}
};

inline ModularData modular_data(unsigned kappa, const NFElem& a) {
    CycloDomain dom = modular_domain(kappa);
    auto bu = braiding_units(dom);
    bool unit = false;
    for (const auto& u : bu.units) unit = unit || u == a;
    if (!unit) throw DomainError("modular_data: a is not a braiding unit");
    const int L = static_cast<int>(kappa) - 1;
    ModularData md{kappa, dom, a, DenseMatrix<NFElem>(L, L, dom.zero()), {}};
    for (int m = 0; m < L; ++m)
        for (int n = 0; n < L; ++n) {
            NFElem s = qint(static_cast<long>(m + 1) * (n + 1), dom);
            if ((m + n) % 2 == 1) s = dom.zero() - s;
            md.S.at(m, n) = s;
        }
    NFElem minus_a = dom.zero() - a;
    for (int n = 0; n < L; ++n)
        md.T.push_back(epow(minus_a, static_cast<long>(n) * (n + 2)));
    return md;
}

/// Modularity = exact non-degeneracy of S.
inline bool check_modular(const ModularData& md) {
    NFElem det = determinant(md.S, md.dom.zero(), md.dom.one());
    return !det.is_zero();
}

/// Twist-ratio transparency test from the modularity proof: m is transparent
/// iff theta_k = theta_m * theta_n for every n and every simple k in m (x) n.
inline std::vector<int> transparent_simples(unsigned kappa, const NFElem& a) {
    ModularData md = modular_data(kappa, a);
    FusionRing R = fusion_ring(kappa);
    const int L = static_cast<int>(kappa) - 1;
    std::vector<int> out;
    for (int m = 0; m < L; ++m) {
        bool transparent = true;
        for (int n = 0; n < L && transparent; ++n)
            for (int k = 0; k < L && transparent; ++k) {
                if (R.N[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] == 0) continue;
                if (!(md.T[static_cast<std::size_t>(k)] ==
                      md.T[static_cast<std::size_t>(m)] * md.T[static_cast<std::size_t>(n)]))
                    transparent = false;
            }
        if (transparent) out.push_back(m);
    }
    return out;
}

/// Cross-check variant (invented plumbing, not from the cited proof): the
/// S-matrix criterion s_{m,n} = s_{0,m} s_{0,n} / s_{0,0} for all n.
inline std::vector<int> transparent_simples_smatrix(const ModularData& md) {
    const int L = static_cast<int>(md.kappa) - 1;
    NFElem s00_inv = md.S.at(0, 0).inv();
    std::vector<int> out;
    for (int m = 0; m < L; ++m) {
        bool transparent = true;
        for (int n = 0; n < L && transparent; ++n)
            if (!(md.S.at(m, n) == md.S.at(0, m) * md.S.at(0, n) * s00_inv)) transparent = false;
        if (transparent) out.push_back(m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization.

inline std::string fusion_csv(const FusionRing& R) {
    std::ostringstream os;
    os << "m,n,k,mult\n";
    const int L = static_cast<int>(R.kappa) - 1;
    for (int m = 0; m < L; ++m)
        for (int n = 0; n < L; ++n)
            for (int k = 0; k < L; ++k)
                if (R.N[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)][static_cast<std::size_t>(k)])
                    os << m << "," << n << "," << k << ",1\n";
    return os.str();
}

inline std::string smatrix_csv(const ModularData& md) {
    std::ostringstream os;
    const int L = static_cast<int>(md.kappa) - 1;
    for (int m = 0; m < L; ++m) {
        for (int n = 0; n < L; ++n) {
            if (n) os << ",";
            os << "\"" << nf_to_string(md.S.at(m, n), md.dom.M) << "\"";
        }
        os << "\n";
    }
    return os.str();
}

/// One self-contained JSON document per kappa.
inline std::string fusion_json_doc(unsigned kappa, const NFElem& a) {
    ModularData md = modular_data(kappa, a);
    FusionRing R = fusion_ring(kappa);
    const int L = static_cast<int>(kappa) - 1;
    nlohmann::json j;
    j["kappa"] = kappa;
    j["a"] = nf_to_string(a, md.dom.M);
    j["labels"] = R.labels;
    std::vector<std::string> dims;
    for (int n = 0; n < L; ++n) dims.push_back(nf_to_string(md.S.at(0, n), md.dom.M));
    j["dims"] = dims;
    j["fusion"] = R.N;
    std::vector<std::vector<std::string>> srows;
    for (int m = 0; m < L; ++m) {
        std::vector<std::string> row;
        for (int n = 0; n < L; ++n) row.push_back(nf_to_string(md.S.at(m, n), md.dom.M));
        srows.push_back(std::move(row));
    }
    j["S"] = srows;
    std::vector<std::string> trow;
    for (const auto& t : md.T) trow.push_back(nf_to_string(t, md.dom.M));
    j["T"] = trow;
    j["modular"] = check_modular(md);
    j["transparent"] = transparent_simples(kappa, a);
    return j.dump(2);
}

}  // namespace tlkit
