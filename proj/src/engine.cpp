#include "cq/engine.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>

namespace cq {

namespace {

struct SchemeEntry {
    SchemeId id;
    const char* name;
};

constexpr SchemeEntry kSchemes[] = {
    {SchemeId::CqMann, "CqMann"},
    {SchemeId::MannPcInner, "MannPcInner"},
    {SchemeId::MannPcNorm, "MannPcNorm"},
    {SchemeId::MannStrictPc, "MannStrictPc"},
    {SchemeId::MannNonexpStrict, "MannNonexpStrict"},
    {SchemeId::IshikawaPc, "IshikawaPc"},
    {SchemeId::IshikawaPcConj, "IshikawaPcConj"},
    {SchemeId::IshikawaStrictPc, "IshikawaStrictPc"},
    {SchemeId::IshikawaStrictPcConj, "IshikawaStrictPcConj"},
    {SchemeId::IshikawaNonexpA, "IshikawaNonexpA"},
    {SchemeId::IshikawaNonexpB, "IshikawaNonexpB"},
    {SchemeId::IshikawaNonexpC, "IshikawaNonexpC"},
    {SchemeId::IshikawaNonexpConj, "IshikawaNonexpConj"},
    {SchemeId::HalpernPcConj, "HalpernPcConj"},
    {SchemeId::HalpernStrictPc, "HalpernStrictPc"},
    {SchemeId::HalpernStrictPcConj, "HalpernStrictPcConj"},
    {SchemeId::HalpernNonexpDeduced, "HalpernNonexpDeduced"},
    {SchemeId::HalpernNonexp, "HalpernNonexp"},
};

}  // namespace

SchemeId parse_scheme(const std::string& name) {
    for (const auto& e : kSchemes)
        if (name == e.name) return e.id;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::string scheme_name(SchemeId id) {
    for (const auto& e : kSchemes)
        if (id == e.id) return e.name;
    throw std::logic_error("scheme_name: bad id");
}

std::vector<std::string> scheme_names() {
    std::vector<std::string> out;
    for (const auto& e : kSchemes) out.emplace_back(e.name);
    return out;
}

Mode parse_mode(const std::string& name) {
    if (name == "CQ") return Mode::CQ;
    if (name == "MonotoneC") return Mode::MonotoneC;
    if (name == "MonotoneQ") return Mode::MonotoneQ;
    if (name == "MonotoneCQ") return Mode::MonotoneCQ;
    throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::CQ: return "CQ";
        case Mode::MonotoneC: return "MonotoneC";
        case Mode::MonotoneQ: return "MonotoneQ";
        case Mode::MonotoneCQ: return "MonotoneCQ";
    }
    throw std::logic_error("mode_name: bad mode");
}

std::string terminal_name(Terminal t) {
    switch (t) {
        case Terminal::Converged: return "Converged";
        case Terminal::MaxIterations: return "MaxIterations";
        case Terminal::Infeasible: return "Infeasible";
        case Terminal::AssertionFailed: return "AssertionFailed";
    }
    throw std::logic_error("terminal_name: bad terminal");
}

SchemeSpec default_spec(SchemeId id) {
    SchemeSpec s;
    s.scheme = id;
    switch (id) {
        case SchemeId::CqMann:
            s.alpha = Schedule::constant(0.5);
            break;
        case SchemeId::MannPcInner:
        case SchemeId::MannPcNorm:
            s.alpha = Schedule::constant(0.2);
            s.tau = Schedule::constant(1.0);
            break;
        case SchemeId::MannStrictPc:
        case SchemeId::MannNonexpStrict:
            s.alpha = Schedule::constant(0.5);
            break;
        case SchemeId::IshikawaPc:
            s.alpha = Schedule::constant(0.3);
            s.beta = Schedule::constant(0.25);
            break;
        case SchemeId::IshikawaPcConj:
            s.alpha = Schedule::constant(0.2);
            s.beta = Schedule::constant(0.2);
            s.tau = Schedule::constant(1.0);
            break;
        case SchemeId::IshikawaStrictPc:
        case SchemeId::IshikawaStrictPcConj:
            s.alpha = Schedule::constant(0.4);
            s.beta = Schedule::constant(0.5);
            break;
        case SchemeId::IshikawaNonexpA:
            s.alpha = Schedule::constant(0.3);
            s.beta = Schedule::constant(0.3);
            break;
        case SchemeId::IshikawaNonexpB:
            s.alpha = Schedule::reciprocal();
            s.beta = Schedule::constant(0.9);
            break;
        case SchemeId::IshikawaNonexpC:
            s.alpha = Schedule::constant(0.1);
            s.beta = Schedule::constant(0.5);
            break;
        case SchemeId::IshikawaNonexpConj:
            s.alpha = Schedule::constant(0.5);
            s.beta = Schedule::constant(0.5);
            break;
        case SchemeId::HalpernPcConj:
            s.alpha = Schedule::constant(0.2);
            s.beta = Schedule::geo_to_one(0.25);  // anchor weight
            s.tau = Schedule::constant(1.0);
            break;
        case SchemeId::HalpernStrictPcConj:
            s.alpha = Schedule::constant(0.5);
            s.beta = Schedule::geo_to_one(0.25);
            break;
        case SchemeId::HalpernStrictPc:
        case SchemeId::HalpernNonexpDeduced:
        case SchemeId::HalpernNonexp:
            s.alpha = Schedule::geo_to_one(0.25);  // anchor weight
            break;
    }
    return s;
}

void require_compatible(const SchemeSpec& spec, const Mapping& t) {
    const MappingClass& c = t.cls();
    auto fail = [&](const char* need) {
        throw std::invalid_argument("scheme " + scheme_name(spec.scheme) + " needs a " + need +
                                    " mapping but '" + t.name() + "' is " + c.describe());
    };
    switch (spec.scheme) {
        case SchemeId::CqMann:
        case SchemeId::MannNonexpStrict:
        case SchemeId::IshikawaNonexpA:
        case SchemeId::IshikawaNonexpB:
        case SchemeId::IshikawaNonexpC:
        case SchemeId::IshikawaNonexpConj:
        case SchemeId::HalpernNonexpDeduced:
        case SchemeId::HalpernNonexp:
            if (!c.is_nonexpansive()) fail("nonexpansive");
            break;
        case SchemeId::MannStrictPc:
        case SchemeId::IshikawaStrictPc:
        case SchemeId::IshikawaStrictPcConj:
        case SchemeId::HalpernStrictPc:
        case SchemeId::HalpernStrictPcConj:
            if (c.is_lipschitz_pc()) fail("strict pseudo-contractive (or nonexpansive)");
            break;
        default:
            break;  // pseudo-contractive schemes take every declared class
    }
}

Engine::Engine(SchemeSpec spec, const Mapping& t, EngineOptions opts)
    : spec_(std::move(spec)), t_(&t), opts_(opts) {
    // Unset schedules fall back to the scheme's documented defaults.
    SchemeSpec d = default_spec(spec_.scheme);
    if (!spec_.alpha.set()) spec_.alpha = d.alpha;
    if (!spec_.beta.set()) spec_.beta = d.beta;
    if (!spec_.tau.set()) spec_.tau = d.tau;
    require_compatible(spec_, t);

    std::mt19937 gen(opts_.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::function<double()> rng = [&] { return u(gen); };
    for (int i = 0; i < opts_.fixed_samples; ++i)
        fixed_points_.push_back(sample_fixed_point(*t_, rng));
}

EngineState Engine::init(const Vector& x0) const {
    if (x0.size() != t_->dim()) throw std::invalid_argument("Engine: x0 dimension mismatch");
    EngineState st;
    st.x0 = x0;
    st.x = x0;
    st.target = project_fixed_set(*t_, x0);
    return st;
}

Engine::BuiltCut Engine::build_cut(int n, const Vector& x, const Vector& x0) const {
    CutContext ctx = CutContext::make(*t_, x, x0);
    auto val = [&](const Schedule& s) { return s.at(n); };
    BuiltCut out;
    switch (spec_.scheme) {
        case SchemeId::CqMann:
            ctx.alpha = val(spec_.alpha);
            out.cut = cut_mann_nonexpansive(ctx);
            break;
        case SchemeId::MannPcInner:
            ctx.alpha = val(spec_.alpha);
            ctx.tau = val(spec_.tau);
            out.cut = cut_mann_pc_inner(ctx);
            break;
        case SchemeId::MannPcNorm:
            ctx.alpha = val(spec_.alpha);
            ctx.tau = val(spec_.tau);
            out.cut = cut_mann_pc_norm(ctx);
            break;
        case SchemeId::MannStrictPc:
        case SchemeId::MannNonexpStrict:
            ctx.alpha = val(spec_.alpha);
            out.cut = cut_mann_strict_pc(ctx);
            break;
        case SchemeId::IshikawaPc:
            ctx.alpha = val(spec_.alpha);
            ctx.beta = val(spec_.beta);
            out.cut = cut_ishikawa_pc(ctx);
            break;
        case SchemeId::IshikawaPcConj: {
            ctx.alpha = val(spec_.alpha);
            ctx.beta = val(spec_.beta);
            ctx.tau = val(spec_.tau);
            CutContext inner = ctx;
            Cut c1 = cut_mann_pc_inner(inner);
            Cut c2 = cut_ishikawa_pc(ctx);
            out.cut = cut_conjunction({std::move(c1), std::move(c2)}, 0);
            break;
        }
        case SchemeId::IshikawaStrictPc:
            ctx.alpha = val(spec_.alpha);
            ctx.beta = val(spec_.beta);
            out.cut = cut_ishikawa_strict_pc(ctx);
            break;
        case SchemeId::IshikawaStrictPcConj: {
            ctx.alpha = val(spec_.alpha);
            ctx.beta = val(spec_.beta);
            CutContext inner = ctx;
            Cut c1 = cut_mann_strict_pc(inner);
            Cut c2 = cut_ishikawa_strict_pc(ctx);
            out.cut = cut_conjunction({std::move(c1), std::move(c2)}, 0);
            break;
        }
        case SchemeId::IshikawaNonexpA:
            ctx.alpha = val(spec_.alpha);
            ctx.beta = val(spec_.beta);
            out.cut = cut_ishikawa_nonexp_simple(ctx);
            break;
        case SchemeId::IshikawaNonexpB:
            ctx.alpha = val(spec_.alpha);
            ctx.beta = val(spec_.beta);
            out.cut = cut_ishikawa_nonexpansive(ctx, IshikawaNonexpRegime::ThetaBound);
            break;
        case SchemeId::IshikawaNonexpC:
            ctx.alpha = val(spec_.alpha);
            ctx.beta = val(spec_.beta);
            out.cut = cut_ishikawa_nonexpansive(ctx, IshikawaNonexpRegime::NormBound);
            break;
        case SchemeId::IshikawaNonexpConj: {
            ctx.alpha = val(spec_.alpha);
            ctx.beta = val(spec_.beta);
            CutContext inner = ctx;
            Cut c1 = cut_mann_nonexpansive(inner);
            Cut c2 = cut_ishikawa_nonexpansive(ctx, IshikawaNonexpRegime::ThetaBound);
            out.cut = cut_conjunction({std::move(c1), std::move(c2)}, 0);
            break;
        }
        case SchemeId::HalpernPcConj: {
            ctx.alpha = val(spec_.alpha);
            ctx.tau = val(spec_.tau);
            ctx.anchor_weight = val(spec_.beta);
            CutContext inner = ctx;
            Cut c1 = cut_mann_pc_inner(inner);
            Cut c2 = cut_halpern_pc(ctx);
            out.cut = cut_conjunction({std::move(c1), std::move(c2)}, 0);
            break;
        }
        case SchemeId::HalpernStrictPc:
        case SchemeId::HalpernNonexpDeduced:
            ctx.anchor_weight = val(spec_.alpha);
            out.cut = cut_halpern_strict_pc(ctx);
            break;
        case SchemeId::HalpernStrictPcConj: {
            ctx.alpha = val(spec_.alpha);
            ctx.anchor_weight = val(spec_.beta);
            CutContext inner = ctx;
            Cut c1 = cut_mann_strict_pc(inner);
            Cut c2 = cut_halpern_strict_pc(ctx);
            out.cut = cut_conjunction({std::move(c1), std::move(c2)}, 0);
            break;
        }
        case SchemeId::HalpernNonexp:
            ctx.anchor_weight = val(spec_.alpha);
            out.cut = cut_halpern_nonexpansive(ctx);
            break;
    }
    out.v = ctx.v;
    out.y = ctx.y;
    return out;
}

namespace {

/// g at least as tight as h in the same direction makes h redundant.
bool dominated(const Halfspace& h, const Halfspace& g) {
    double hn = h.a.norm(), gn = g.a.norm();
    if (hn <= Halfspace::kDegenerateNorm || gn <= Halfspace::kDegenerateNorm) return false;
    if ((h.a / hn - g.a / gn).norm() > 1e-10) return false;
    return g.b / gn <= h.b / hn + 1e-12;
}

}  // namespace

void Engine::append_windowed(std::vector<Halfspace>& acc, const Halfspace& h) const {
    if (h.degenerate() && h.degenerate_feasible()) return;
    acc.push_back(h);
    if (static_cast<int>(acc.size()) <= opts_.window) return;
    // Drop the oldest entry that is provably redundant; the nested-set
    // semantics survive only when the dropped constraint is implied.
    for (std::size_t i = 0; i < acc.size(); ++i) {
        for (std::size_t j = 0; j < acc.size(); ++j) {
            if (i == j) continue;
            if (dominated(acc[i], acc[j])) {
                acc.erase(acc.begin() + static_cast<std::ptrdiff_t>(i));
                return;
            }
        }
    }
    throw std::runtime_error(
        "monotone accumulation exceeded the window and no halfspace is provably redundant");
}

StepRecord Engine::step(EngineState& st) {
    StepRecord rec;
    rec.n = st.n;
    rec.x = st.x;
    rec.tx = (*t_)(st.x);
    rec.residual = (st.x - rec.tx).norm();
    rec.radial = (st.x - st.x0).norm();
    rec.dist_to_target = (st.x - st.target).norm();

    BuiltCut bc = build_cut(st.n, st.x, st.x0);
    rec.v = bc.v;
    rec.y = bc.y;
    if (opts_.cut_offset_fault != 0.0)
        for (auto& hs : bc.cut.halfspaces) hs.b += opts_.cut_offset_fault;
    Cut cut = select_cn_star(std::move(bc.cut), spec_.cn_star, *t_);
    rec.mu = cut.bound ? cut.bound->mu : 0.0;

    Halfspace q = cut_q(st.x, st.x0);

    std::vector<Halfspace> target_hs;
    switch (spec_.mode) {
        case Mode::CQ:
            target_hs = cut.halfspaces;
            target_hs.push_back(q);
            break;
        case Mode::MonotoneC:
            for (const auto& hs : cut.halfspaces) append_windowed(st.acc_c, hs);
            target_hs = st.acc_c;
            break;
        case Mode::MonotoneQ:
            append_windowed(st.acc_q, q);
            target_hs = cut.halfspaces;
            target_hs.insert(target_hs.end(), st.acc_q.begin(), st.acc_q.end());
            break;
        case Mode::MonotoneCQ:
            for (const auto& hs : cut.halfspaces) append_windowed(st.acc_c, hs);
            append_windowed(st.acc_q, q);
            target_hs = st.acc_c;
            target_hs.insert(target_hs.end(), st.acc_q.begin(), st.acc_q.end());
            break;
    }

    // Check (c) before projecting so a corrupted cut surfaces as an assertion
    // failure rather than an infeasibility error.
    bool fixed_ok = true;
    if (opts_.check_invariants) {
        for (const Vector& p : fixed_points_) {
            for (const auto& hs : target_hs) {
                double tol = 1e-9 * (1.0 + hs.a.norm() * (1.0 + p.norm()));
                if (!hs.contains(p, tol)) {
                    fixed_ok = false;
                    break;
                }
            }
            if (cut.ball && (p - cut.ball->center).norm() > cut.ball->radius + 1e-9)
                fixed_ok = false;
            if (!fixed_ok) break;
        }
    }

    if (!fixed_ok && opts_.strict_assertions) {
        // The corrupted target may well be empty; stop before the projection
        // turns the membership violation into an infeasibility error.
        rec.assertions[checks::kFixedInTarget] = false;
        st.prev_radial = rec.radial;
        ++st.n;
        return rec;
    }

    ProjectionProblem prob{st.x0, target_hs,
                           cut.ball ? AmbientSet::ball(cut.ball->center, cut.ball->radius)
                                    : AmbientSet::whole_space()};
    ProjectionResult pr = project_intersection(prob, opts_.projection);

    rec.step = (pr.point - st.x).norm();
    rec.theta_val = cut.theta_at(pr.point);

    if (opts_.check_invariants) {
        rec.assertions = assert_framework(rec, st.prev_radial, t_->cls().lipschitz());
        rec.assertions[checks::kFixedInTarget] = fixed_ok;
        bool bounded = true;
        for (const Vector& p : fixed_points_) {
            if (rec.radial > (st.x0 - p).norm() + 1e-9) {
                bounded = false;
                break;
            }
        }
        rec.assertions[checks::kBoundedByFixed] = bounded;
    }

    st.prev_radial = rec.radial;
    st.x = pr.point;
    ++st.n;
    return rec;
}

std::map<std::string, bool> assert_framework(const StepRecord& rec, double prev_radial,
                                             double lipschitz) {
    std::map<std::string, bool> out;
    // mu == 0 marks a cut without a standalone residual bound.
    double slack = 1e-9 * (1.0 + rec.residual);
    out[checks::kResidualBound] =
        rec.mu <= 0.0 || rec.residual <= rec.mu * rec.step + rec.theta_val + slack;
    out[checks::kRadialMonotone] = prev_radial < 0.0 || rec.radial >= prev_radial - 1e-10;
    out[checks::kMuLowerBound] = rec.mu <= 0.0 || rec.mu >= lipschitz + 1.0 - 1e-9;
    return out;
}

RunResult Engine::run(const Vector& x0, const StopRule& stop) {
    EngineState st = init(x0);
    RunResult out;
    out.target = st.target;
    for (int n = 0; n < stop.max_iter; ++n) {
        Vector tx = (*t_)(st.x);
        double residual = (st.x - tx).norm();
        if (residual <= stop.tol) {
            StepRecord rec;
            rec.n = n;
            rec.x = st.x;
            rec.tx = std::move(tx);
            rec.residual = residual;
            rec.radial = (st.x - st.x0).norm();
            rec.dist_to_target = (st.x - st.target).norm();
            out.records.push_back(std::move(rec));
            out.terminal = Terminal::Converged;
            out.limit = st.x;
            out.iterations = n;
            return out;
        }
        StepRecord rec;
        try {
            rec = step(st);
        } catch (const InfeasibleError& e) {
            out.terminal = Terminal::Infeasible;
            out.detail = e.what();
            out.limit = st.x;
            out.iterations = n;
            return out;
        } catch (const MaxIterationsError& e) {
            out.terminal = Terminal::MaxIterations;
            out.detail = e.what();
            out.limit = st.x;
            out.iterations = n;
            return out;
        }
        out.records.push_back(rec);
        if (opts_.check_invariants && opts_.strict_assertions) {
            for (const auto& [name, ok] : rec.assertions) {
                if (!ok) {
                    out.terminal = Terminal::AssertionFailed;
                    out.detail = "invariant '" + name + "' failed at step " + std::to_string(n);
                    out.limit = st.x;
                    out.iterations = n + 1;
                    return out;
                }
            }
        }
    }
    out.terminal = Terminal::MaxIterations;
    out.limit = st.x;
    out.iterations = stop.max_iter;
    return out;
}

ComparisonReport compare_modes(const SchemeSpec& base, const Mapping& t, const Vector& x0,
                               const StopRule& stop, const EngineOptions& opts) {
    ComparisonReport rep;
    for (Mode mode : {Mode::CQ, Mode::MonotoneC, Mode::MonotoneQ, Mode::MonotoneCQ}) {
        SchemeSpec spec = base;
        spec.mode = mode;
        Engine engine(spec, t, opts);
        rep.runs.push_back(ModeRun{mode, engine.run(x0, stop)});
    }
    const std::size_t m = rep.runs.size();
    rep.limit_distance.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double d = (rep.runs[i].result.limit - rep.runs[j].result.limit).norm();
            rep.limit_distance[i][j] = d;
            rep.worst_pairwise = std::max(rep.worst_pairwise, d);
        }
    }
    if (std::holds_alternative<CnStarIdentity>(base.cn_star)) {
        const auto& rc = rep.runs[1].result.records;
        const auto& rcq = rep.runs[3].result.records;
        std::size_t common = std::min(rc.size(), rcq.size());
        for (std::size_t k = 0; k < common; ++k) {
            rep.monotone_c_cq_sequence_gap =
                std::max(rep.monotone_c_cq_sequence_gap, (rc[k].x - rcq[k].x).norm());
        }
    }
    return rep;
}

void write_run_csv(const RunResult& run, std::ostream& out) {
    out << "# cq-run-csv v1\n";
    out << "n,residual,radial,step,dist_to_target,theta\n";
    out << std::setprecision(17);
    for (const auto& rec : run.records) {
        out << rec.n << ',' << rec.residual << ',' << rec.radial << ',' << rec.step << ','
            << rec.dist_to_target << ',' << rec.theta_val << '\n';
    }
}

}  // namespace cq
