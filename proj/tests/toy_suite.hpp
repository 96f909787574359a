#ifndef PRZK_TESTS_TOY_SUITE_HPP
#define PRZK_TESTS_TOY_SUITE_HPP

// Exhaustive checks over the order-11 toy group, shared by the unit tests and
// the acceptance runner. Every verdict is compared against plain modular
// arithmetic from oracle.hpp rather than the library's own group code.

#include "oracle.hpp"
#include "przk/proof.hpp"
#include "przk/registration.hpp"
#include "przk/session.hpp"

#include <functional>
#include <string>
#include <vector>

namespace toy_suite {

using namespace przk;
using namespace przk::protocol;

inline constexpr std::uint32_t kSkD = 3;   // pk_d = 8
inline constexpr std::uint32_t kHsp = 7;   // pk_p = 13
inline constexpr std::uint64_t kT = 1700000000;

inline const ToyGroup& toy() { return toy_group(); }
inline Scalar s(std::uint32_t v) { return toy().scalar(v); }
inline GroupElement e(std::uint32_t v) { return toy().element(v); }
inline std::uint32_t val(const Scalar& x) { return ToyGroup::value(x); }
inline std::uint32_t val(const GroupElement& x) { return ToyGroup::value(x); }

inline Digest zeta() { return binding_commitment(e(13), e(8), kT); }

inline TwinSession twin() {
    return TwinSession(toy(), TwinKeyPair::from_secret(toy(), s(kSkD)), e(13), zeta());
}
inline EntitySession entity() {
    return EntitySession(toy(), EntityKeys::from_hash(toy(), s(kHsp)), e(8), zeta());
}

// Schnorr check g^z = alpha * pk^c evaluated with integers mod 23.
inline bool oracle_schnorr(std::uint32_t alpha, std::uint32_t c, std::uint32_t z, std::uint32_t pk) {
    return oracle::g_pow(z) == alpha * oracle::pow_mod(pk, c, oracle::kP) % oracle::kP;
}

struct Exhaustive {
    std::size_t completeness_cases = 0;
    std::size_t completeness_failures = 0;
    std::size_t extraction_cases = 0;
    std::size_t extraction_failures = 0;
    std::size_t blind_attempts = 0;
    std::size_t blind_accepts = 0;
    std::size_t replay_cases = 0;
    std::size_t replay_accepts = 0;
};

// Completeness over (r, c, sk_d) in 11 x 11 x 10; special soundness over
// every forked pair; blind impersonation over every (alpha, z) for each c;
// replay of every recorded (alpha, c, z) against every fresh c' != c.
inline Exhaustive run_exhaustive() {
    const ToyGroup& g = toy();
    Exhaustive out;
    for (std::uint32_t sk = 1; sk < 11; ++sk) {
        const auto pk = static_cast<std::uint32_t>(oracle::g_pow(sk));
        for (std::uint32_t r = 0; r < 11; ++r) {
            const auto alpha = static_cast<std::uint32_t>(oracle::g_pow(r));
            for (std::uint32_t c = 0; c < 11; ++c) {
                const Scalar z = schnorr_response(g, s(r), s(c), s(sk));
                ++out.completeness_cases;
                const bool lib = schnorr_holds(g, e(alpha), s(c), z, e(pk));
                if (!lib || !oracle_schnorr(alpha, c, val(z), pk) || val(z) != (r + c * sk) % 11) {
                    ++out.completeness_failures;
                }
                for (std::uint32_t c2 = 0; c2 < 11; ++c2) {
                    const Scalar z2 = schnorr_response(g, s(r), s(c2), s(sk));
                    if (c2 != c) {
                        Transcript t1, t2;
                        t1.alpha = t2.alpha = e(alpha);
                        t1.c = s(c);
                        t1.z = z;
                        t2.c = s(c2);
                        t2.z = z2;
                        ++out.extraction_cases;
                        if (val(extract_secret(g, t1, t2)) != sk) ++out.extraction_failures;
                        ++out.replay_cases;
                        if (schnorr_holds(g, e(alpha), s(c2), z, e(pk)) || oracle_schnorr(alpha, c2, val(z), pk)) {
                            ++out.replay_accepts;
                        }
                    }
                }
            }
        }
    }
    // The blind attacker never sees sk_d; it picks alpha and z, then faces c.
    const auto pk = static_cast<std::uint32_t>(oracle::g_pow(kSkD));
    for (std::uint32_t c = 0; c < 11; ++c) {
        for (std::uint32_t a = 0; a < 11; ++a) {
            const auto alpha = static_cast<std::uint32_t>(oracle::g_pow(a));
            for (std::uint32_t z = 0; z < 11; ++z) {
                ++out.blind_attempts;
                const bool lib = schnorr_holds(g, e(alpha), s(c), s(z), e(pk));
                if (lib != oracle_schnorr(alpha, c, z, pk)) ++out.completeness_failures;
                if (lib) ++out.blind_accepts;
            }
        }
    }
    return out;
}

// --- state-machine fuzzing ----------------------------------------------------

struct FuzzStats {
    std::size_t nodes = 0;
    std::size_t key_established = 0;
    std::size_t violations = 0;
    std::string first_violation;
};

// Input alphabet: every message kind with a handful of field values, chosen
// so that both honest and forged values of each credential are present.
inline std::vector<Message> entity_alphabet() {
    std::vector<Message> a{Commit{e(1)}, Commit{e(9)}, Commit{e(13)}, Challenge{s(4)},
                           IdentityProof{s(kHsp), e(4)}, Verdict{true, Reason::Ok}, Verdict{false, Reason::BadProof}};
    for (std::uint32_t z = 0; z < 11; ++z) a.push_back(Response{s(z)});
    return a;
}

inline std::vector<Message> twin_alphabet() {
    std::vector<Message> a{Commit{e(9)}, Response{s(6)}, Verdict{true, Reason::Ok},
                           Verdict{false, Reason::BadIdentity}};
    for (std::uint32_t c : {0u, 4u, 10u}) a.push_back(Challenge{s(c)});
    for (std::uint32_t h : {0u, 7u, 8u}) {
        for (std::uint32_t r : {1u, 4u, 16u}) {
            a.push_back(IdentityProof{s(h), e(r)});
        }
    }
    return a;
}

inline std::string describe(const std::vector<std::string>& path) {
    std::string out;
    for (const auto& p : path) out += (out.empty() ? "" : " ") + p;
    return out;
}

// P is driven by arbitrary inputs. Whenever it reaches KeyEstablished, the
// first Response it accepted must satisfy the Schnorr check for its own (alpha, c).
inline FuzzStats fuzz_entity(std::size_t depth) {
    FuzzStats st;
    const auto alphabet = entity_alphabet();
    std::vector<std::string> path;

    std::function<void(const EntitySession&, const Rng&, std::optional<std::uint32_t>, std::size_t)> dfs =
        [&](const EntitySession& sess, const Rng& rng, std::optional<std::uint32_t> accepted_z, std::size_t left) {
            ++st.nodes;
            if (sess.phase() == Phase::KeyEstablished) {
                ++st.key_established;
                const bool ok = sess.schnorr_verified() && accepted_z && sess.alpha() && sess.c() &&
                                oracle_schnorr(val(*sess.alpha()), val(*sess.c()), *accepted_z, 8);
                if (!ok && st.violations++ == 0) st.first_violation = "entity: " + describe(path);
            }
            if (sess.phase() == Phase::Failed) {
                // Absorbing: no input produces a reply or a transition.
                for (const Message& m : alphabet) {
                    EntitySession next = sess;
                    Rng next_rng = rng;
                    if ((next.receive(m, next_rng) || next.phase() != Phase::Failed) && st.violations++ == 0) {
                        st.first_violation = "entity left Failed: " + describe(path);
                    }
                }
                return;
            }
            if (left == 0) return;
            for (const Message& m : alphabet) {
                EntitySession next = sess;
                Rng next_rng = rng;
                const Phase before = next.phase();
                (void)next.receive(m, next_rng);
                auto z = accepted_z;
                if (const auto* r = std::get_if<Response>(&m); r && before == Phase::Challenged) z = val(r->z);
                path.push_back(std::string(to_string(tag_of(m))));
                dfs(next, next_rng, z, left - 1);
                path.pop_back();
            }
        };
    dfs(entity(), Rng(1), std::nullopt, depth);
    return st;
}

// D is driven by arbitrary inputs plus its own commit action. Whenever it
// reaches KeyEstablished, the IdentityProof it accepted must satisfy
// g^h_sp = pk_p and carry a non-degenerate R_p.
inline FuzzStats fuzz_twin(std::size_t depth) {
    FuzzStats st;
    const auto alphabet = twin_alphabet();
    std::vector<std::string> path;

    std::function<void(const TwinSession&, const Rng&, std::optional<std::pair<std::uint32_t, std::uint32_t>>,
                       std::size_t)>
        dfs = [&](const TwinSession& sess, const Rng& rng, std::optional<std::pair<std::uint32_t, std::uint32_t>> proof,
                  std::size_t left) {
            ++st.nodes;
            if (sess.phase() == Phase::KeyEstablished) {
                ++st.key_established;
                const bool ok = sess.identity_verified() && proof && oracle::g_pow(proof->first) == 13 &&
                                proof->second != 1 && proof->second * 13 % 23 != 1;
                if (!ok && st.violations++ == 0) st.first_violation = "twin: " + describe(path);
            }
            if (sess.phase() == Phase::Failed) {
                for (const Message& m : alphabet) {
                    TwinSession next = sess;
                    if ((next.receive(m) || next.phase() != Phase::Failed) && st.violations++ == 0) {
                        st.first_violation = "twin left Failed: " + describe(path);
                    }
                }
                return;
            }
            if (left == 0) return;

            // Local commit action; allowed only from Idle.
            {
                TwinSession next = sess;
                Rng next_rng = rng;
                const Phase before = next.phase();
                try {
                    (void)next.commit(next_rng);
                    if (before != Phase::Idle && st.violations++ == 0) st.first_violation = "commit out of phase";
                } catch (const ProtocolError&) {
                    if (before == Phase::Idle && st.violations++ == 0) st.first_violation = "commit refused in Idle";
                    if (next.phase() != before && st.violations++ == 0) st.first_violation = "refused commit moved";
                }
                path.push_back("commit()");
                dfs(next, next_rng, proof, left - 1);
                path.pop_back();
            }
            for (const Message& m : alphabet) {
                TwinSession next = sess;
                const Phase before = next.phase();
                (void)next.receive(m);
                auto pr = proof;
                if (const auto* ip = std::get_if<IdentityProof>(&m); ip && before == Phase::ResponseSent) {
                    pr = std::make_pair(val(ip->h_sp), val(ip->r_p_pub));
                }
                path.push_back(std::string(to_string(tag_of(m))));
                dfs(next, rng, pr, left - 1);
                path.pop_back();
            }
        };
    dfs(twin(), Rng(2), std::nullopt, depth);
    return st;
}

} // namespace toy_suite

#endif
