#include "csent/locc.hpp"

#include <cmath>

#include <Eigen/QR>

#include "csent/errors.hpp"
#include "csent/kernels.hpp"
#include "csent/linalg.hpp"

namespace csent {

void Instrument::check_complete(double tol) const {
    if (kraus.empty()) throw InstrumentError("instrument: no Kraus operators");
    const long d = kraus[0].rows();
    Mat acc = Mat::Zero(d, d);
    for (const auto& k : kraus) {
        if (k.rows() != d || k.cols() != d)
            throw InstrumentError("instrument: Kraus shapes differ");
        acc += k.adjoint() * k;
    }
    double dev = max_abs(acc - Mat::Identity(d, d));
    if (dev > tol)
        throw InstrumentError("instrument: completeness violated by " + std::to_string(dev));
}

namespace {

long subspace_dim(const SubsystemLayout& layout, const std::vector<std::string>& labels) {
    long d = 1;
    for (const auto& l : labels) d *= layout.factors[layout.position(l)].dim;
    return d;
}

Mat embed_on_labels(const SubsystemLayout& layout, const std::vector<std::string>& labels,
                    const Mat& op) {
    return kern::embed(op, layout.dims(), layout.positions(labels));
}

void check_instrument_party(const SubsystemLayout& layout, const Instrument& inst) {
    for (const auto& l : inst.labels)
        if (layout.factors[layout.position(l)].party != inst.party)
            throw DomainError("instrument: factor '" + l + "' not owned by the acting party");
}

} // namespace

MultipartiteState apply_flagged_instrument(const MultipartiteState& s, const Instrument& inst,
                                           const std::string& flag_label) {
    inst.check_complete();
    check_instrument_party(s.layout, inst);
    if (s.layout.has(flag_label)) throw LabelError("flag label '" + flag_label + "' in use");

    const int n_out = static_cast<int>(inst.kraus.size());
    if (static_cast<long>(s.dim()) * n_out > kMaxTotalDim)
        throw DomainError("apply_flagged_instrument: dimension cap exceeded");
    if (subspace_dim(s.layout, inst.labels) != inst.kraus[0].rows())
        throw ShapeError("apply_flagged_instrument: Kraus dimension mismatch");

    SubsystemLayout out_layout = s.layout;
    out_layout.factors.push_back(Factor{flag_label, n_out, inst.party});

    const long d = s.dim();
    Mat out = Mat::Zero(d * n_out, d * n_out);
    for (int i = 0; i < n_out; ++i) {
        Mat k = embed_on_labels(s.layout, inst.labels, inst.kraus[i]);
        Mat block = k * s.rho * k.adjoint();
        // flag is the last factor: global index = base * n_out + flag
        for (long r = 0; r < d; ++r)
            for (long c = 0; c < d; ++c)
                out(r * n_out + i, c * n_out + i) = block(r, c);
    }
    return MultipartiteState{std::move(out), std::move(out_layout)};
}

MultipartiteState communicate(const MultipartiteState& s, const std::string& flag_label) {
    const int pos = s.layout.position(flag_label);
    const int df = s.layout.factors[pos].dim;
    const Party owner = s.layout.factors[pos].party;

    // classicality: off-diagonal mass in the flag index
    const auto dims = s.layout.dims();
    const auto str = kern::strides(dims);
    double off = 0.0;
    for (long r = 0; r < s.rho.rows(); ++r) {
        const long rf = (r / str[pos]) % df;
        for (long c = 0; c < s.rho.cols(); ++c) {
            const long cf = (c / str[pos]) % df;
            if (rf != cf) off = std::max(off, std::abs(s.rho(r, c)));
        }
    }
    if (off > 1e-8)
        throw ClassicalityError("communicate: flag '" + flag_label +
                                "' carries off-diagonal mass " + std::to_string(off));

    if (static_cast<long>(s.dim()) * df > kMaxTotalDim)
        throw DomainError("communicate: dimension cap exceeded");

    const std::string copy_label = flag_label + "c";
    if (s.layout.has(copy_label)) throw LabelError("flag copy label '" + copy_label + "' in use");

    SubsystemLayout out_layout = s.layout;
    out_layout.factors.push_back(Factor{copy_label, df, other_party(owner)});

    Mat e0 = Mat::Zero(df, df);
    e0(0, 0) = 1.0;
    Mat big = kern::tensor(s.rho, e0);

    // modular-addition copy |i, j> -> |i, i + j mod df> on (flag, copy)
    Mat uc = Mat::Zero(static_cast<long>(df) * df, static_cast<long>(df) * df);
    for (int i = 0; i < df; ++i)
        for (int j = 0; j < df; ++j)
            uc(static_cast<long>(i) * df + (i + j) % df, static_cast<long>(i) * df + j) = 1.0;
    Mat u_full = kern::embed(uc, out_layout.dims(),
                             {out_layout.position(flag_label),
                              out_layout.position(copy_label)});
    return MultipartiteState{u_full * big * u_full.adjoint(), std::move(out_layout)};
}

RunResult run(const LoccProtocol& protocol, const MultipartiteState& s) {
    RunResult res{s, {}};
    int flag_counter = 0;
    for (const auto& step : protocol.rounds) {
        if (std::holds_alternative<LocalUnitaryStep>(step)) {
            const auto& st = std::get<LocalUnitaryStep>(step);
            for (const auto& l : st.labels)
                if (res.state.layout.factors[res.state.layout.position(l)].party != st.party)
                    throw DomainError("local unitary: factor '" + l + "' not owned by party");
            Mat u = embed_on_labels(res.state.layout, st.labels, st.u);
            res.state.rho = u * res.state.rho * u.adjoint();
            res.log.push_back({"local-unitary", res.state.rho.trace().real(),
                               res.state.layout});
        } else if (std::holds_alternative<LocalChannelStep>(step)) {
            const auto& st = std::get<LocalChannelStep>(step);
            st.inst.check_complete();
            check_instrument_party(res.state.layout, st.inst);
            Mat acc = Mat::Zero(res.state.dim(), res.state.dim());
            for (const auto& k : st.inst.kraus) {
                Mat ke = embed_on_labels(res.state.layout, st.inst.labels, k);
                acc += ke * res.state.rho * ke.adjoint();
            }
            res.state.rho = std::move(acc);
            res.log.push_back({"local-channel", res.state.rho.trace().real(),
                               res.state.layout});
        } else if (std::holds_alternative<FlaggedInstrumentStep>(step)) {
            const auto& st = std::get<FlaggedInstrumentStep>(step);
            std::string label = st.flag_label;
            if (label.empty())
                label = (st.inst.party == Party::A ? "fa" : "fb") +
                        std::to_string(++flag_counter);
            res.state = apply_flagged_instrument(res.state, st.inst, label);
            res.log.push_back({"flagged-instrument -> " + label,
                               res.state.rho.trace().real(), res.state.layout});
        } else if (std::holds_alternative<CommunicateStep>(step)) {
            const auto& st = std::get<CommunicateStep>(step);
            res.state = communicate(res.state, st.flag_label);
            res.log.push_back({"communicate " + st.flag_label,
                               res.state.rho.trace().real(), res.state.layout});
        } else {
            const auto& st = std::get<DiscardFlagStep>(step);
            res.state = partial_trace(res.state, {st.label});
            res.log.push_back({"discard-flag " + st.label, res.state.rho.trace().real(),
                               res.state.layout});
        }
    }
    return res;
}

std::string to_string(Quantifier q) {
    switch (q) {
        case Quantifier::BuresEntanglement: return "bures-entanglement";
        case Quantifier::CseBures: return "cse-bures";
        case Quantifier::CseHs: return "cse-hs";
    }
    return "?";
}

LoccProtocol random_locc(std::uint64_t seed, const SubsystemLayout& start_layout,
                         const RandomLoccOptions& options) {
    if (options.depth < 1) throw DomainError("random_locc: depth must be >= 1");
    Rng rng(seed);
    LoccProtocol proto;

    SubsystemLayout layout = start_layout;
    Party party = Party::A;
    std::vector<std::string> live_flags;  // oldest first, copies excluded
    int counter = 0;

    auto flag_dim_product = [&](Party p) {
        long d = 1;
        for (const auto& f : layout.factors)
            if (f.party == p && f.label.rfind("f", 0) == 0) d *= f.dim;
        return d;
    };

    for (int round = 0; round < options.depth; ++round) {
        const std::string target =
            party == Party::A ? start_layout.factors[start_layout.party_positions(Party::A)[0]].label
                              : start_layout.factors[start_layout.party_positions(Party::B)[0]].label;
        const int dt = layout.factors[layout.position(target)].dim;

        int outcomes = rng.uniform_int(1, std::max(1, options.max_outcomes));
        // respect the per-side flag budget by discarding the oldest flags
        while (!live_flags.empty() &&
               flag_dim_product(party) * outcomes > options.flag_budget_per_side) {
            std::string victim = live_flags.front();
            live_flags.erase(live_flags.begin());
            if (layout.has(victim)) {
                proto.rounds.push_back(DiscardFlagStep{victim});
                layout = layout.erased({victim});
            }
            if (layout.has(victim + "c")) {
                proto.rounds.push_back(DiscardFlagStep{victim + "c"});
                layout = layout.erased({victim + "c"});
            }
        }
        if (static_cast<long>(layout.dim()) * outcomes > kMaxTotalDim) outcomes = 1;

        Instrument inst;
        inst.party = party;
        inst.labels = {target};
        if (outcomes == 1) {
            inst.kraus = {random_unitary(dt, rng)};
        } else {
            inst.kraus = random_kraus(dt, outcomes, rng);
        }
        std::string flag = (party == Party::A ? "fa" : "fb") + std::to_string(++counter);
        proto.rounds.push_back(FlaggedInstrumentStep{inst, flag});
        layout.factors.push_back(Factor{flag, outcomes, party});
        if (outcomes > 1) live_flags.push_back(flag);

        if (outcomes > 1 && rng.uniform() < options.communicate_probability &&
            static_cast<long>(layout.dim()) * outcomes <= kMaxTotalDim) {
            proto.rounds.push_back(CommunicateStep{flag});
            layout.factors.push_back(Factor{flag + "c", outcomes, other_party(party)});
        }
        party = other_party(party);
    }

    if (options.discard_flags_at_end) {
        for (const auto& f : layout.factors) {
            if (f.label.rfind("fa", 0) == 0 || f.label.rfind("fb", 0) == 0)
                proto.rounds.push_back(DiscardFlagStep{f.label});
        }
    }
    return proto;
}

MonotonicityReport monotonicity_trial(const MultipartiteState& s, const LoccProtocol& protocol,
                                      Quantifier quantifier, const EntOpts& opts, double tol) {
    auto evaluate = [&](const MultipartiteState& state) {
        switch (quantifier) {
            case Quantifier::BuresEntanglement: return bures_entanglement(state, opts).value;
            case Quantifier::CseBures:
                return cse_discord_min(state, DistanceKind::BuresSquared, opts).value;
            case Quantifier::CseHs:
                return cse_discord_min(state, DistanceKind::HilbertSchmidt, opts).value;
        }
        throw DomainError("monotonicity_trial: unknown quantifier");
    };

    MonotonicityReport rep;
    rep.tol = tol;
    rep.before = evaluate(s);
    auto out = run(protocol, s);
    rep.after = evaluate(out.state);
    rep.violation = std::max(0.0, rep.after - rep.before - tol);
    return rep;
}

} // namespace csent
