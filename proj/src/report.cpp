#include "nbgame/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace nbgame {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

namespace {

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += format_double(v[i]);
    }
    return out;
}

void write_share(std::ostream& out, const char* label, const SharePoint& pt) {
    out << label << ".rates: " << join(pt.rates) << '\n';
    out << label << ".bins_user1:";
    for (std::size_t k : pt.bins_user1) out << ' ' << k;
    out << '\n' << label << ".bins_user2:";
    for (std::size_t k : pt.bins_user2) out << ' ' << k;
    out << '\n';
}

}  // namespace

void write_report(std::ostream& out, const SolveReport& report) {
    out << "solver: " << report.solver << '\n';
    out << "rates: " << join(report.rates) << '\n';
    out << "disagreement: " << join(report.disagreement) << '\n';
    out << "log_nf: " << format_double(report.log_nf) << '\n';
    if (report.iterations > 0) {
        out << "iterations: " << report.iterations << '\n';
        out << "residual: " << format_double(report.residual) << '\n';
    }
    if (report.classification) {
        const auto& cls = *report.classification;
        out << "classification: "
            << (cls.kind == SystemKind::BandwidthDominant ? "bandwidth-dominant"
                                                          : "power-dominant")
            << '\n';
        out << "tau: " << format_double(cls.tau) << '\n';
        if (cls.witness_bin) {
            out << "witness_bin: " << *cls.witness_bin << '\n';
            out << "witness_interval: [" << format_double(cls.witness_lo)
                << ", " << format_double(cls.witness_hi) << "]\n";
        }
    }
    if (report.shared_bin >= 0) {
        out << "shared_bin: " << report.shared_bin << '\n';
        out << "beta: " << format_double(report.beta) << '\n';
    }
    if (report.share_a && report.share_b) {
        out << "lambda: " << format_double(report.lambda) << '\n';
        write_share(out, "share_a", *report.share_a);
        write_share(out, "share_b", *report.share_b);
    }
    if (report.alloc.users > 0) {
        out << "allocation:\n";
        for (std::size_t i = 0; i < report.alloc.users; ++i) {
            out << "  user " << (i + 1) << " alpha:";
            for (std::size_t k = 0; k < report.alloc.bins; ++k)
                out << ' ' << format_double(report.alloc.a(i, k));
            out << "\n  user " << (i + 1) << " power:";
            for (std::size_t k = 0; k < report.alloc.bins; ++k)
                out << ' ' << format_double(report.alloc.p(i, k));
            out << '\n';
        }
    }
}

void write_report_csv(std::ostream& out, const SolveReport& report) {
    out << "record,user,bin,alpha,power,rate,disagreement\n";
    for (std::size_t i = 0; i < report.alloc.users; ++i)
        for (std::size_t k = 0; k < report.alloc.bins; ++k)
            out << "alloc," << (i + 1) << ',' << k << ','
                << format_double(report.alloc.a(i, k)) << ','
                << format_double(report.alloc.p(i, k)) << ",,\n";
    for (std::size_t i = 0; i < report.rates.size(); ++i)
        out << "rates," << (i + 1) << ",,,,"
            << format_double(report.rates[i]) << ','
            << format_double(report.disagreement[i]) << '\n';
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << contents;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + path);
}

}  // namespace nbgame
