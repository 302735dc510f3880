#include "nmecut/experiment.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace nmecut {

std::vector<std::uint64_t> ExperimentConfig::default_shot_grid() {
    std::vector<std::uint64_t> grid;
    for (std::uint64_t s = 250; s <= 5000; s += 250) grid.push_back(s);
    return grid;
}

void ExperimentConfig::validate() const {
    if (f_values.empty()) throw Error(ErrorKind::InvalidParameter, "f_values must not be empty");
    if (f_values.size() >= (std::size_t{1} << 14)) throw Error(ErrorKind::InvalidParameter, "too many f values");
    for (double f : f_values)
        if (!std::isfinite(f) || f < 0.5 || f > 1.0)
            throw Error(ErrorKind::OutOfRange, "f value " + std::to_string(f) + " outside [0.5, 1]");
    if (shot_grid.empty()) throw Error(ErrorKind::InvalidParameter, "shot grid must not be empty");
    if (shot_grid.size() >= (std::size_t{1} << 16)) throw Error(ErrorKind::InvalidParameter, "shot grid too long");
    for (std::size_t i = 0; i < shot_grid.size(); ++i) {
        if (shot_grid[i] == 0) throw Error(ErrorKind::InvalidParameter, "shot counts must be positive");
        if (i > 0 && shot_grid[i] <= shot_grid[i - 1])
            throw Error(ErrorKind::InvalidParameter, "shot grid must be strictly increasing");
    }
    if (n_states == 0) throw Error(ErrorKind::InvalidParameter, "n_states must be at least 1");
    if (n_states >= (std::uint64_t{1} << 32)) throw Error(ErrorKind::InvalidParameter, "n_states too large");
}

ComplexMatrix haar_random_unitary(RandomSource& rng) {
    Eigen::Matrix2cd g;
    const double scale = 1.0 / std::sqrt(2.0);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(r, c) = Complex{re, im} * scale;
        }
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
    Eigen::Matrix2cd q = qr.householderQ();
    const Eigen::Matrix2cd& packed = qr.matrixQR();
    for (int c = 0; c < 2; ++c) {
        const Complex d = packed(c, c);
        const double mag = std::abs(d);
        q.col(c) *= mag > 0.0 ? d / mag : Complex{1.0, 0.0};
    }
    ComplexMatrix out(2, 2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) out(r, c) = q(static_cast<int>(r), static_cast<int>(c));
    return out;
}

namespace {

double trial_error(const QuasiProbDecomposition& qpd, const ComplexMatrix& prep, std::uint64_t shots,
                   RandomSource& rng, SamplingMode mode) {
    const ComplexMatrix z = gates::z();
    return std::abs(estimate_cut_expectation(qpd, prep, z, shots, rng, mode) - exact_expectation(prep, z));
}

// Stream ids: the top two bits tag the purpose.
std::uint64_t prep_stream(bool paired, std::size_t f_index, std::uint64_t state) {
    const std::uint64_t group = paired ? 0 : static_cast<std::uint64_t>(f_index) + 1;
    return (std::uint64_t{1} << 62) | (group << 40) | state;
}

std::uint64_t sampling_stream(std::size_t f_index, std::size_t shot_index, std::uint64_t state) {
    return (std::uint64_t{2} << 62) | (static_cast<std::uint64_t>(f_index) << 48) |
           (static_cast<std::uint64_t>(shot_index) << 32) | state;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

double run_trial(NmeParameter k, const ComplexMatrix& prep, std::uint64_t shots, RandomSource& rng,
                 SamplingMode mode) {
    return trial_error(nme_wire_cut(k), prep, shots, rng, mode);
}

std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& config) {
    config.validate();
    const std::size_t n_f = config.f_values.size();
    const std::size_t n_shots = config.shot_grid.size();
    const std::uint64_t n_states = config.n_states;

    std::vector<NmeParameter> ks;
    std::vector<QuasiProbDecomposition> cuts;
    for (double f : config.f_values) {
        ks.push_back(k_from_f(f));
        cuts.push_back(nme_wire_cut(ks.back()));
    }

    // errors[(f * n_shots + s) * n_states + state]
    std::vector<double> errors(n_f * n_shots * n_states, 0.0);

    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t state = begin; state < end; ++state)
            for (std::size_t fi = 0; fi < n_f; ++fi) {
                ComplexMatrix prep = gates::identity();
                if (!config.identity_prep) {
                    RandomSource prep_rng(config.seed, prep_stream(config.paired_states, fi, state));
                    prep = haar_random_unitary(prep_rng);
                }
                for (std::size_t si = 0; si < n_shots; ++si) {
                    RandomSource rng(config.seed, sampling_stream(fi, si, state));
                    errors[(fi * n_shots + si) * n_states + state] =
                        trial_error(cuts[fi], prep, config.shot_grid[si], rng, config.mode);
                }
            }
    };

    unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_states));
    if (threads <= 1) {
        work(0, n_states);
    } else {
        std::vector<std::exception_ptr> failures(threads);
        {
            std::vector<std::jthread> pool;
            const std::uint64_t chunk = (n_states + threads - 1) / threads;
            for (unsigned t = 0; t < threads; ++t) {
                const std::uint64_t begin = std::min<std::uint64_t>(n_states, t * chunk);
                const std::uint64_t end = std::min<std::uint64_t>(n_states, begin + chunk);
                pool.emplace_back([&, t, begin, end] {
                    try {
                        work(begin, end);
                    } catch (...) {
                        failures[t] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& failure : failures)
            if (failure) std::rethrow_exception(failure);
    }

    std::vector<ExperimentRecord> records;
    records.reserve(n_f * n_shots);
    for (std::size_t fi = 0; fi < n_f; ++fi)
        for (std::size_t si = 0; si < n_shots; ++si) {
            const double* cell = errors.data() + (fi * n_shots + si) * n_states;
            double sum = 0.0;
            for (std::uint64_t i = 0; i < n_states; ++i) sum += cell[i];
            const double mean = sum / static_cast<double>(n_states);
            double sq = 0.0;
            for (std::uint64_t i = 0; i < n_states; ++i) sq += (cell[i] - mean) * (cell[i] - mean);
            const double sd = n_states > 1 ? std::sqrt(sq / static_cast<double>(n_states - 1)) : 0.0;
            records.push_back({config.f_values[fi], ks[fi].k(), config.shot_grid[si], mean,
                               sd / std::sqrt(static_cast<double>(n_states)), n_states});
        }
    return records;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::Parse, path.string() + ": top level must be an object");

    ExperimentConfig config;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "f_values") config.f_values = value.get<std::vector<double>>();
            else if (key == "shots") config.shot_grid = value.get<std::vector<std::uint64_t>>();
            else if (key == "n_states") config.n_states = value.get<std::uint64_t>();
            else if (key == "seed") config.seed = value.get<std::uint64_t>();
            else if (key == "mode") config.mode = parse_sampling_mode(value.get<std::string>());
            else if (key == "paired_states") config.paired_states = value.get<bool>();
            else if (key == "identity_prep") config.identity_prep = value.get<bool>();
            else if (key == "threads") config.threads = value.get<unsigned>();
            else throw Error(ErrorKind::Parse, path.string() + ": unknown key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
    return config;
}

std::string to_csv(std::span<const ExperimentRecord> records) {
    std::string out = "f,k,shots,avg_error,std_error,n_states\n";
    for (const auto& r : records) {
        out += format_double(r.f) + ',' + format_double(r.k) + ',' + std::to_string(r.shots) + ',' +
               format_double(r.avg_error) + ',' + format_double(r.std_error) + ',' + std::to_string(r.n_states) + '\n';
    }
    return out;
}

namespace {

template <typename T>
T parse_field(std::string_view field, std::size_t line) {
    T value{};
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
    return value;
}

}  // namespace

std::vector<ExperimentRecord> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "missing CSV header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "f,k,shots,avg_error,std_error,n_states") throw Error(ErrorKind::Parse, "unexpected CSV header '" + line + "'");

    std::vector<ExperimentRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
            fields.push_back(rest.substr(0, pos));
        fields.push_back(rest);
        if (fields.size() != 6)
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected 6 fields, got " +
                                              std::to_string(fields.size()));
        records.push_back({parse_field<double>(fields[0], line_no), parse_field<double>(fields[1], line_no),
                           parse_field<std::uint64_t>(fields[2], line_no), parse_field<double>(fields[3], line_no),
                           parse_field<double>(fields[4], line_no), parse_field<std::uint64_t>(fields[5], line_no)});
    }
    return records;
}

void write_csv(std::span<const ExperimentRecord> records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    out << to_csv(records);
    if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

std::vector<ExperimentRecord> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_csv(buf.str());
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

namespace {

std::map<double, std::vector<ExperimentRecord>> group_by_f(std::span<const ExperimentRecord> records) {
    std::map<double, std::vector<ExperimentRecord>> series;
    for (const auto& r : records) series[r.f].push_back(r);
    for (auto& [f, s] : series)
        std::stable_sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.shots < b.shots; });
    return series;
}

}  // namespace

std::string to_svg(std::span<const ExperimentRecord> records) {
    if (records.empty()) throw Error(ErrorKind::InvalidParameter, "cannot plot an empty record set");
    const auto series = group_by_f(records);

    constexpr double width = 800, height = 500;
    constexpr double left = 80, right = 160, top = 30, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = static_cast<double>(records.front().shots), x_max = x_min;
    double y_min = 0.0, y_max = 0.0;
    bool any_positive = false;
    for (const auto& r : records) {
        x_min = std::min(x_min, static_cast<double>(r.shots));
        x_max = std::max(x_max, static_cast<double>(r.shots));
        if (r.avg_error > 0.0) {
            y_min = any_positive ? std::min(y_min, r.avg_error) : r.avg_error;
            y_max = any_positive ? std::max(y_max, r.avg_error) : r.avg_error;
            any_positive = true;
        }
    }
    double decade_lo = any_positive ? std::floor(std::log10(y_min)) : -3.0;
    double decade_hi = any_positive ? std::ceil(std::log10(y_max)) : 0.0;
    if (decade_hi <= decade_lo) decade_hi = decade_lo + 1.0;
    if (x_max <= x_min) {
        x_min -= 1.0;
        x_max += 1.0;
    }

    auto px = [&](double shots) { return left + (shots - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double err) { return top + (decade_hi - std::log10(err)) / (decade_hi - decade_lo) * plot_h; };

    static constexpr const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                              "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (double d = decade_lo; d <= decade_hi; d += 1.0) {
        const double y = py(std::pow(10.0, d));
        os << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w << "\" y2=\"" << y
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << d << "</text>\n";
    }
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << x_min
       << "</text>\n";
    os << "<text x=\"" << left + plot_w << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << x_max
       << "</text>\n";
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">shots</text>\n";
    os << "<text transform=\"translate(20," << top + plot_h / 2
       << ") rotate(-90)\" text-anchor=\"middle\">average error</text>\n";

    std::size_t idx = 0;
    for (const auto& [f, s] : series) {
        const char* color = palette[idx % std::size(palette)];
        std::vector<std::pair<double, double>> points;
        for (const auto& r : s)
            if (r.avg_error > 0.0) points.emplace_back(px(static_cast<double>(r.shots)), py(r.avg_error));
        os << "<g class=\"series\" data-f=\"" << format_g12(f) << "\">\n";
        if (points.size() >= 2) {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < points.size(); ++i)
                os << (i ? " " : "") << points[i].first << ',' << points[i].second;
            os << "\"/>\n";
        } else if (points.size() == 1) {
            os << "<circle cx=\"" << points[0].first << "\" cy=\"" << points[0].second << "\" r=\"3\" fill=\"" << color
               << "\"/>\n";
        }
        os << "</g>\n";
        const double ly = top + 10 + 18.0 * static_cast<double>(idx);
        os << "<line x1=\"" << left + plot_w + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 35 << "\" y2=\""
           << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text class=\"legend\" x=\"" << left + plot_w + 40 << "\" y=\"" << ly + 4 << "\">f = " << format_g12(f)
           << "</text>\n";
        ++idx;
    }
    os << "</svg>\n";
    return os.str();
}

void render_svg(std::span<const ExperimentRecord> records, const std::filesystem::path& path) {
    const std::string svg = to_svg(records);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    out << svg;
    if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

double log_log_slope(std::span<const ExperimentRecord> series) {
    if (series.size() < 2) throw Error(ErrorKind::InvalidParameter, "slope needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : series) {
        if (!(r.avg_error > 0.0)) throw Error(ErrorKind::InvalidParameter, "slope needs positive errors");
        const double x = std::log(static_cast<double>(r.shots));
        const double y = std::log(r.avg_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(series.size());
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) throw Error(ErrorKind::InvalidParameter, "slope needs distinct shot counts");
    return (n * sxy - sx * sy) / denom;
}

std::vector<SweepCheck> check_sweep_invariants(std::span<const ExperimentRecord> records) {
    std::vector<SweepCheck> checks;
    const auto series = group_by_f(records);

    for (const auto& [f, s] : series) {
        SweepCheck c{"slope f=" + format_g12(f), false, ""};
        if (s.size() < 2) {
            c.passed = true;
            c.detail = "single point, not evaluated";
        } else {
            try {
                const double slope = log_log_slope(s);
                c.passed = slope >= -0.65 && slope <= -0.35;
                c.detail = "slope " + format_g12(slope) + " (allowed [-0.65, -0.35])";
            } catch (const Error& e) {
                c.detail = e.what();
            }
        }
        checks.push_back(std::move(c));
    }

    if (series.size() < 2) return checks;
    const auto& [f_lo, lo] = *series.begin();
    const auto& [f_hi, hi] = *series.rbegin();
    std::map<std::uint64_t, std::pair<ExperimentRecord, ExperimentRecord>> common;
    for (const auto& r : lo)
        for (const auto& q : hi)
            if (r.shots == q.shots) common.emplace(r.shots, std::make_pair(r, q));

    SweepCheck order{"ordering f=" + format_g12(f_lo) + " > f=" + format_g12(f_hi) + " for shots >= 1000", true, ""};
    std::size_t compared = 0;
    for (const auto& [shots, pair] : common) {
        if (shots < 1000) continue;
        ++compared;
        if (!(pair.first.avg_error > pair.second.avg_error)) {
            order.passed = false;
            order.detail += "violated at " + std::to_string(shots) + " shots; ";
        }
    }
    if (order.passed) order.detail = std::to_string(compared) + " budgets compared";
    checks.push_back(std::move(order));

    if (!common.empty()) {
        const auto& [shots, pair] = *common.rbegin();
        const double gap = pair.first.avg_error - pair.second.avg_error;
        const double sigma = std::hypot(pair.first.std_error, pair.second.std_error);
        checks.push_back({"separation at " + std::to_string(shots) + " shots", gap > 4.0 * sigma,
                          "gap " + format_g12(gap) + " vs 4 sigma " + format_g12(4.0 * sigma)});
    }
    return checks;
}

}  // namespace nmecut
