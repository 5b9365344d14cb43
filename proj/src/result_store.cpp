#include "radchemo/result_store.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace radchemo {

namespace fs = std::filesystem;

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_for_write(const fs::path& path)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::string optional_cell(const std::optional<double>& x)
{
    return x ? format_number(*x) : "nan";
}

}  // namespace

void write_json(const fs::path& path, const nlohmann::json& doc)
{
    std::ofstream out = open_for_write(path);
    out << doc.dump(2) << '\n';
}

void write_samples_csv(const fs::path& path, const std::vector<FunctionalSample>& samples)
{
    std::ofstream out = open_for_write(path);
    out << "t,phi,psi,sup_u,mass,vmax,residual_w_bound,residual_phi_bound,residual_vlower,residual_rvr,residual_wt\n";
    for (const FunctionalSample& s : samples) {
        const double row[] = {s.t,    s.phi,  s.psi,           s.sup_u,           s.mass,
                              s.vmax, s.residual_w_bound, s.residual_phi_bound, s.residual_vlower,
                              s.residual_rvr, s.residual_wt};
        for (std::size_t i = 0; i < std::size(row); ++i)
            out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

void write_summary_csv(const fs::path& path, const std::vector<SweepRow>& rows)
{
    std::ofstream out = open_for_write(path);
    out << "beta,M,classification,t_blowup,grid_N\n";
    for (const SweepRow& r : rows)
        out << format_number(r.beta) << ',' << format_number(r.M) << ',' << to_string(r.classification) << ','
            << optional_cell(r.t_blowup) << ',' << r.grid_N << '\n';
}

void write_run(const fs::path& dir, const RunOutcome& outcome)
{
    write_samples_csv(dir / "samples.csv", outcome.samples);
    write_json(dir / "manifest.json", outcome.manifest);
}

void write_sweep(const fs::path& dir, const std::vector<SweepRow>& rows, const nlohmann::json& manifest)
{
    write_summary_csv(dir / "summary.csv", rows);
    write_json(dir / "manifest.json", manifest);
}

void write_mstar(const fs::path& dir, const MStarResult& result, const nlohmann::json& manifest)
{
    std::ofstream out = open_for_write(dir / "mstar.csv");
    out << "M,classification,t_blowup\n";
    for (const MStarTrial& t : result.runs)
        out << format_number(t.M) << ',' << to_string(t.classification) << ',' << optional_cell(t.t_blowup) << '\n';
    out.close();
    write_json(dir / "manifest.json", manifest);
}

void write_compare(const fs::path& dir, const CompareReport& report, const nlohmann::json& manifest)
{
    std::ofstream out = open_for_write(dir / "compare.csv");
    out << "t,rel_discrepancy\n";
    for (const ComparePoint& p : report.series)
        out << format_number(p.t) << ',' << format_number(p.rel_discrepancy) << '\n';
    out.close();
    write_json(dir / "manifest.json", manifest);
}

}  // namespace radchemo
