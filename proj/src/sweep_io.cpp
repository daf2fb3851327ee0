#include "ebc/sweep_io.hpp"

#include "ebc/text_format.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ebc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(trim(cur));
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

int n_os_to_tenths(double n_os) {
    const double t = n_os * 10.0;
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-6 || r < 1) {
        throw std::invalid_argument("n_os values must be positive multiples of 0.1, got " + format_sig(n_os));
    }
    return static_cast<int>(r);
}

NmseForm nmse_form_from(const std::string& s) {
    if (s == "ratio_of_sums") {
        return NmseForm::RatioOfSums;
    }
    if (s == "pointwise") {
        return NmseForm::Pointwise;
    }
    throw std::invalid_argument("nmse_form must be ratio_of_sums or pointwise");
}

std::string nmse_form_name(NmseForm f) { return f == NmseForm::RatioOfSums ? "ratio_of_sums" : "pointwise"; }

// Applies one key with its value given as JSON (both input forms end up here).
void apply_key(SweepConfig& cfg, const std::string& key, const nlohmann::json& v) {
    if (key == "master_seed") {
        cfg.master_seed = v.get<std::uint64_t>();
    } else if (key == "m_realizations") {
        cfg.m_realizations = v.get<int>();
    } else if (key == "w_mean_list") {
        cfg.w_mean_list = v.get<std::vector<double>>();
    } else if (key == "n_os_list") {
        cfg.n_os_tenths.clear();
        for (double x : v.get<std::vector<double>>()) {
            cfg.n_os_tenths.push_back(n_os_to_tenths(x));
        }
    } else if (key == "n_bits_list") {
        cfg.n_bits_list = v.get<std::vector<int>>();
    } else if (key == "n_levels_list") {
        cfg.n_levels_list = v.get<std::vector<int>>();
    } else if (key == "target_nmse_list") {
        cfg.target_nmse_list = v.get<std::vector<double>>();
    } else if (key == "grid_rate") {
        cfg.grid_rate = v.get<double>();
    } else if (key == "s_max") {
        cfg.s_max = v.get<double>();
    } else if (key == "w_max") {
        cfg.w_max = v.get<double>();
    } else if (key == "workers") {
        cfg.workers = v.get<int>();
    } else if (key == "nmse_form") {
        cfg.nmse_form = nmse_form_from(v.get<std::string>());
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

bool is_list_key(const std::string& key) { return key.size() > 5 && key.substr(key.size() - 5) == "_list"; }

nlohmann::json parse_flat_value(const std::string& key, const std::string& text) {
    auto scalar = [&](const std::string& s) -> nlohmann::json {
        if (key == "nmse_form") {
            return s;
        }
        try {
            return nlohmann::json::parse(s);
        } catch (const nlohmann::json::exception&) {
            throw std::invalid_argument("bad value for '" + key + "': " + s);
        }
    };
    if (!is_list_key(key)) {
        return scalar(text);
    }
    auto arr = nlohmann::json::array();
    std::string body = text;
    if (!body.empty() && body.front() == '[' && body.back() == ']') {
        body = body.substr(1, body.size() - 2);
    }
    for (const auto& item : split(body, ',')) {
        if (!item.empty()) {
            arr.push_back(scalar(item));
        }
    }
    return arr;
}

std::string opt(const std::optional<double>& v, int digits) { return v ? format_sig(*v, digits) : std::string(); }

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

template <typename T>
std::string grid_hash(const std::vector<T>& grid) {
    std::string canon;
    for (const auto& v : grid) {
        if constexpr (std::is_floating_point_v<T>) {
            canon += format_sig(v, 17);
        } else {
            canon += std::to_string(v);
        }
        canon += ';';
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(canon)));
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    os << content;
    os.flush();
    if (!os) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

} // namespace

SweepConfig parse_sweep_config(const std::string& text) {
    SweepConfig cfg;
    const std::string body = trim(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument(std::string("config JSON: ") + e.what());
        }
        for (const auto& [key, value] : j.items()) {
            try {
                apply_key(cfg, key, value);
            } catch (const nlohmann::json::exception& e) {
                throw std::invalid_argument("config key '" + key + "': " + e.what());
            }
        }
        return cfg;
    }
    std::istringstream in(body);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        try {
            apply_key(cfg, key, parse_flat_value(key, trim(line.substr(eq + 1))));
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

SweepConfig load_manifest_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot read manifest " + path.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("manifest " + path.string() + ": " + e.what());
    }
    SweepConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "grid_hashes" || key == "comparison_rows" || key == "unattainable_rows" || key == "wsk_selection") {
            continue;
        }
        apply_key(cfg, key, value);
    }
    return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot read config " + path.string());
    }
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_sweep_config(ss.str());
}

void write_records_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
    os << "system,w_mean,n_levels,delta_l,n_bits,f_s,nmse,rate_hz,t_min_mean\n";
    for (const auto& r : records) {
        os << to_string(r.system) << ',' << format_sig(r.w_mean, 17) << ',';
        if (r.system == System::Ebc) {
            os << r.n_levels << ',' << format_sig(r.delta_l, 17) << ",,,";
        } else {
            os << ",," << r.n_bits << ',' << format_sig(r.f_s, 17) << ',';
        }
        os << format_sig(r.nmse, 17) << ',' << format_sig(r.rate, 17) << ',' << opt(r.t_min_mean, 17) << '\n';
    }
}

std::vector<SweepRecord> read_records_csv(std::istream& is) {
    std::vector<SweepRecord> out;
    std::string line;
    if (!std::getline(is, line) || trim(line) != "system,w_mean,n_levels,delta_l,n_bits,f_s,nmse,rate_hz,t_min_mean") {
        throw std::runtime_error("records.csv: unexpected header");
    }
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 9) {
            throw std::runtime_error("records.csv line " + std::to_string(line_no) + ": expected 9 fields");
        }
        try {
            SweepRecord r;
            r.system = system_from_string(f[0]);
            r.w_mean = std::stod(f[1]);
            if (r.system == System::Ebc) {
                r.n_levels = std::stoi(f[2]);
                r.delta_l = std::stod(f[3]);
            } else {
                r.n_bits = std::stoi(f[4]);
                r.f_s = std::stod(f[5]);
            }
            r.nmse = std::stod(f[6]);
            r.rate = std::stod(f[7]);
            if (!f[8].empty()) {
                r.t_min_mean = std::stod(f[8]);
            }
            out.push_back(r);
        } catch (const std::logic_error& e) {
            throw std::runtime_error("records.csv line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void write_fig4_csv(std::ostream& os, const std::vector<SweepRecord>& records, double w_mean) {
    os << "system,n_bits,rate_hz,nmse\n";
    for (const auto& r : records) {
        if (r.w_mean != w_mean) {
            continue;
        }
        os << to_string(r.system) << ',';
        if (r.system == System::Wsk) {
            os << r.n_bits;
        }
        os << ',' << format_sig(r.rate) << ',' << format_sig(r.nmse) << '\n';
    }
}

void write_fig5_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    os << "w_mean,target_nmse,p_rel\n";
    for (const auto& r : rows) {
        if (r.status == RowStatus::Ok) {
            os << format_sig(r.w_mean) << ',' << format_sig(r.target_nmse) << ',' << format_sig(r.p_rel) << '\n';
        }
    }
}

void write_fig6_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    os << "w_mean,target_nmse,b_rel,b_rel_worst\n";
    for (const auto& r : rows) {
        if (r.status == RowStatus::Ok && r.b_rel) {
            os << format_sig(r.w_mean) << ',' << format_sig(r.target_nmse) << ',' << format_sig(*r.b_rel) << ','
               << format_sig(r.b_rel_worst) << '\n';
        }
    }
}

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    os << "w_mean,target_nmse,status,p_rel,b_rel,b_rel_worst,n_bits,f_s,r_symbol,r_event,t_min,delta_l\n";
    for (const auto& r : rows) {
        const bool ok = r.status == RowStatus::Ok;
        const bool has_wsk = r.has_wsk;
        const bool has_ebc = r.has_ebc;
        os << format_sig(r.w_mean) << ',' << format_sig(r.target_nmse) << ',' << to_string(r.status) << ','
           << (ok ? format_sig(r.p_rel) : "") << ',' << (ok ? opt(r.b_rel, 9) : "") << ','
           << (ok ? format_sig(r.b_rel_worst) : "") << ',' << (has_wsk ? std::to_string(r.n_bits) : "") << ','
           << (has_wsk ? format_sig(r.f_s) : "") << ',' << (has_wsk ? format_sig(r.r_symbol) : "") << ','
           << (has_ebc ? format_sig(r.r_event) : "") << ',' << (has_ebc ? opt(r.t_min, 9) : "") << ','
           << (has_ebc ? format_sig(r.delta_l) : "") << '\n';
    }
}

std::string run_manifest(const SweepConfig& config, const std::vector<ComparisonRow>& rows) {
    nlohmann::ordered_json j;
    j["master_seed"] = config.master_seed;
    j["m_realizations"] = config.m_realizations;
    j["w_mean_list"] = config.w_mean_list;
    std::vector<double> n_os;
    for (int t : config.n_os_tenths) {
        n_os.push_back(t / 10.0);
    }
    j["n_os_list"] = n_os;
    j["n_bits_list"] = config.n_bits_list;
    j["n_levels_list"] = config.n_levels_list;
    j["target_nmse_list"] = config.target_nmse_list;
    j["grid_rate"] = config.grid_rate;
    j["s_max"] = config.s_max;
    j["w_max"] = config.w_max;
    j["nmse_form"] = nmse_form_name(config.nmse_form);
    j["grid_hashes"] = {{"w_mean", grid_hash(config.w_mean_list)},
                        {"n_os_tenths", grid_hash(config.n_os_tenths)},
                        {"n_bits", grid_hash(config.n_bits_list)},
                        {"n_levels", grid_hash(config.n_levels_list)},
                        {"target_nmse", grid_hash(config.target_nmse_list)}};
    std::size_t unattainable = 0;
    for (const auto& r : rows) {
        unattainable += r.status != RowStatus::Ok ? 1 : 0;
    }
    j["comparison_rows"] = rows.size();
    j["unattainable_rows"] = unattainable;
    j["wsk_selection"] = "first NMSE crossing per bit depth along increasing rate, log-log interpolated "
                         "between bracketing grid points; grid point used when no lower bracket exists";
    return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> emit_outputs(const std::vector<ComparisonRow>& rows,
                                                const std::vector<SweepRecord>& records,
                                                const SweepConfig& config, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());
    }
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const auto path = out_dir / name;
        write_file(path, content);
        written.push_back(path);
    };
    for (double w : config.w_mean_list) {
        std::ostringstream os;
        write_fig4_csv(os, records, w);
        emit("fig4_" + format_sig(w) + ".csv", os.str());
    }
    {
        std::ostringstream os;
        write_fig5_csv(os, rows);
        emit("fig5.csv", os.str());
    }
    {
        std::ostringstream os;
        write_fig6_csv(os, rows);
        emit("fig6.csv", os.str());
    }
    {
        std::ostringstream os;
        write_comparison_csv(os, rows);
        emit("comparison.csv", os.str());
    }
    {
        std::ostringstream os;
        write_records_csv(os, records);
        emit("records.csv", os.str());
    }
    emit("run_manifest.json", run_manifest(config, rows));
    return written;
}

} // namespace ebc
