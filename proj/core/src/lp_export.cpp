#include "jobshop/lp_export.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace jobshop {

namespace {

std::string start_var(OperationId op) {
    return "S_" + std::to_string(op.job) + "_" + std::to_string(op.position);
}

std::string pair_var(OperationId a, OperationId b) {
    return "x_" + std::to_string(a.job) + "_" + std::to_string(a.position) + "_" +
           std::to_string(b.job) + "_" + std::to_string(b.position);
}

} // namespace

MipModel build_disjunctive_model(const Instance& instance) {
    MipModel model;
    model.big_m = 1 + instance.total_duration();

    for (int j = 0; j < instance.n_jobs(); ++j)
        for (int p = 0; p < instance.n_machines(); ++p)
            model.start_vars.push_back(start_var({j, p}));

    // job precedence: S_j_p - S_j_(p-1) >= p_(j,p-1)
    for (int j = 0; j < instance.n_jobs(); ++j) {
        for (int p = 1; p < instance.n_machines(); ++p) {
            MipModel::Constraint c;
            c.name = "prec_" + std::to_string(j) + "_" + std::to_string(p);
            c.terms = {{start_var({j, p}), 1.0}, {start_var({j, p - 1}), -1.0}};
            c.rhs = static_cast<double>(instance.duration_of({j, p - 1}));
            model.constraints.push_back(std::move(c));
        }
    }

    // one binary per unordered same-machine pair; x = 1 puts the first op
    // ahead:  S_b - S_a + M(1-x) >= p_a   and   S_a - S_b + M x >= p_b
    const auto big_m = static_cast<double>(model.big_m);
    for (int m = 0; m < instance.n_machines(); ++m) {
        const auto& ops = instance.ops_on_machine(m);
        for (size_t i = 0; i < ops.size(); ++i) {
            for (size_t k = i + 1; k < ops.size(); ++k) {
                const OperationId a = std::min(ops[i], ops[k]);
                const OperationId b = std::max(ops[i], ops[k]);
                const std::string x = pair_var(a, b);
                model.binary_vars.push_back(x);

                MipModel::Constraint fwd;
                fwd.name = "disj_a_" + std::to_string(model.binary_vars.size() - 1);
                fwd.terms = {{start_var(b), 1.0}, {start_var(a), -1.0}, {x, -big_m}};
                fwd.rhs = static_cast<double>(instance.duration_of(a)) - big_m;
                model.constraints.push_back(std::move(fwd));

                MipModel::Constraint bwd;
                bwd.name = "disj_b_" + std::to_string(model.binary_vars.size() - 1);
                bwd.terms = {{start_var(a), 1.0}, {start_var(b), -1.0}, {x, big_m}};
                bwd.rhs = static_cast<double>(instance.duration_of(b));
                model.constraints.push_back(std::move(bwd));
            }
        }
    }

    // makespan covers the final task of every job
    for (int j = 0; j < instance.n_jobs(); ++j) {
        const OperationId last{j, instance.n_machines() - 1};
        MipModel::Constraint c;
        c.name = "mk_" + std::to_string(j);
        c.terms = {{"Cmax", 1.0}, {start_var(last), -1.0}};
        c.rhs = static_cast<double>(instance.duration_of(last));
        model.constraints.push_back(std::move(c));
    }

    return model;
}

std::string render_lp(const MipModel& model) {
    std::ostringstream out;
    out << "Minimize\n obj: Cmax\n";
    out << "Subject To\n";
    for (const auto& c : model.constraints) {
        out << " " << c.name << ":";
        for (const auto& [var, coef] : c.terms) {
            if (coef >= 0)
                out << " + " << coef << " " << var;
            else
                out << " - " << -coef << " " << var;
        }
        out << " >= " << c.rhs << "\n";
    }
    out << "Bounds\n";
    for (const auto& s : model.start_vars) out << " 0 <= " << s << "\n";
    out << " 0 <= Cmax\n";
    if (!model.binary_vars.empty()) {
        out << "Binaries\n";
        for (const auto& x : model.binary_vars) out << " " << x << "\n";
    }
    out << "End\n";
    return out.str();
}

std::string export_disjunctive_lp(const Instance& instance) {
    return render_lp(build_disjunctive_model(instance));
}

std::string export_start_vector(const Instance& instance, const Schedule& schedule) {
    if (const auto violation = validate_schedule(instance, schedule))
        throw std::invalid_argument("cannot export start vector: " + *violation);

    std::ostringstream out;
    out << "# start vector";
    if (!instance.name().empty()) out << " " << instance.name();
    out << "\n";
    for (int j = 0; j < instance.n_jobs(); ++j)
        for (int p = 0; p < instance.n_machines(); ++p)
            out << start_var({j, p}) << " " << schedule.start[instance.op_index({j, p})] << "\n";

    for (int m = 0; m < instance.n_machines(); ++m) {
        const auto& ops = instance.ops_on_machine(m);
        for (size_t i = 0; i < ops.size(); ++i) {
            for (size_t k = i + 1; k < ops.size(); ++k) {
                const OperationId a = std::min(ops[i], ops[k]);
                const OperationId b = std::max(ops[i], ops[k]);
                const bool first_precedes = schedule.start[instance.op_index(a)] <
                                            schedule.start[instance.op_index(b)];
                out << pair_var(a, b) << " " << (first_precedes ? 1 : 0) << "\n";
            }
        }
    }
    out << "Cmax " << schedule.makespan << "\n";
    return out.str();
}

std::optional<std::string> check_start_vector(const MipModel& model,
                                              const std::string& start_text) {
    std::map<std::string, double> value;
    std::istringstream in(start_text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string name;
        double v;
        if (!(fields >> name >> v)) return "malformed start line: " + line;
        value[name] = v;
    }

    for (const auto& s : model.start_vars) {
        auto it = value.find(s);
        if (it == value.end()) return "missing start value " + s;
        if (it->second < 0) return s + " is negative";
    }
    for (const auto& x : model.binary_vars) {
        auto it = value.find(x);
        if (it == value.end()) return "missing binary value " + x;
        if (it->second != 0 && it->second != 1) return x + " is not binary";
    }

    for (const auto& c : model.constraints) {
        double lhs = 0;
        for (const auto& [var, coef] : c.terms) {
            auto it = value.find(var);
            if (it == value.end()) return "constraint " + c.name + " references unset " + var;
            lhs += coef * it->second;
        }
        if (lhs < c.rhs - 1e-9)
            return "constraint " + c.name + " violated: " + std::to_string(lhs) + " < " +
                   std::to_string(c.rhs);
    }
    return std::nullopt;
}

} // namespace jobshop
