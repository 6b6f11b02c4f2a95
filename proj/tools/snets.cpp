// snets: command-line front end for labeled-volume surface nets.
//
// Machine-readable stdout lines start with a fixed key (see docs/FORMATS.md):
//   volume dims=MxNxO spacing=sx,sy,sz origin=ox,oy,oz dtype=T
//   label <value> <count>
//   totals points=P quads=Q triangles=T
//   timing pass1=.. pass2=.. pass3=.. pass4=.. smooth=.. triangulate=..
//   wrote <path>
// Diagnostics go to stderr. Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "snets/extract.hpp"
#include "snets/labels.hpp"
#include "snets/mesh.hpp"
#include "snets/oracle.hpp"
#include "snets/pipeline.hpp"
#include "snets/smooth.hpp"
#include "snets/triangulate.hpp"
#include "snets/volume.hpp"

namespace {

using namespace snets;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

template <class T>
T parse_number(const std::string& s, const char* what) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw UsageError(std::string("bad ") + what + ": '" + s + "'");
    return v;
}

std::array<std::int64_t, 3> parse_dims(const std::string& s) {
    const auto parts = split(s, 'x');
    if (parts.size() != 3) throw UsageError("--dims expects MxNxO");
    return {parse_number<std::int64_t>(parts[0], "dimension"), parse_number<std::int64_t>(parts[1], "dimension"),
            parse_number<std::int64_t>(parts[2], "dimension")};
}

std::array<double, 3> parse_spacing(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 3) throw UsageError("--spacing expects sx,sy,sz");
    return {parse_number<double>(parts[0], "spacing"), parse_number<double>(parts[1], "spacing"),
            parse_number<double>(parts[2], "spacing")};
}

int default_threads() {
    if (const char* env = std::getenv("SNETS_THREADS")) {
        int v = 0;
        auto [p, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), v);
        if (ec == std::errc{} && v > 0) return v;
    }
    return 0;
}

/// Empty optional when the selection names nothing (legal; yields an empty mesh).
std::optional<SelectedLabelSet> select_labels(const std::string& text, const LabeledVolume& vol) {
    std::vector<Label> values;
    try {
        values = parse_label_selection(text, vol);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--labels: ") + e.what());
    }
    if (values.empty()) return std::nullopt;
    return SelectedLabelSet(values);
}

SurfaceNetMesh empty_mesh_for(const LabeledVolume& vol) {
    SurfaceNetMesh m;
    m.spacing = vol.spacing();
    m.origin = vol.origin();
    return m;
}

void warn_if_empty(const SurfaceNetMesh& m) {
    if (m.num_points() == 0) std::cerr << "warning: empty mesh (no boundaries between selected labels)\n";
}

void print_totals(std::uint64_t points, std::uint64_t quads, std::uint64_t triangles) {
    std::cout << "totals points=" << points << " quads=" << quads << " triangles=" << triangles << '\n';
}

void add_smoothing_flags(CLI::App* cmd, SmoothingParams& p, std::string& mode) {
    cmd->add_option("--iterations", p.iterations, "Smoothing iterations")->capture_default_str();
    cmd->add_option("--lambda", p.lambda, "Relaxation factor in [0,1]")->capture_default_str();
    cmd->add_option("--constraint", mode, "Constraint region: sphere|box")->capture_default_str();
    cmd->add_option("--factor", p.constraint_factor, "Constraint region scale")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"snets: shared-boundary surface meshes from labeled volumes"};
    app.require_subcommand(1);
    int threads = default_threads();

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic overlapping-spheres volume");
    std::string gen_dims, gen_radius = "4:12", gen_out, gen_spacing = "1,1,1", gen_dtype = "u16";
    SphereSpec sphere_spec;
    sphere_spec.count = 8;
    gen->add_option("--dims", gen_dims, "MxNxO")->required();
    gen->add_option("--spheres", sphere_spec.count, "Number of spheres")->capture_default_str();
    gen->add_option("--radius", gen_radius, "min:max radius in voxels")->capture_default_str();
    gen->add_option("--seed", sphere_spec.seed, "RNG seed")->capture_default_str();
    gen->add_option("--label-start", sphere_spec.label_start, "Label of the first sphere")->capture_default_str();
    gen->add_option("--spacing", gen_spacing, "sx,sy,sz")->capture_default_str();
    gen->add_option("--dtype", gen_dtype, "u8|u16|u32")->capture_default_str();
    gen->add_option("--out", gen_out, "Output header path")->required();

    // info
    auto* info = app.add_subcommand("info", "Print a volume header and label histogram");
    std::string info_in;
    info->add_option("volume", info_in, "Volume header")->required();

    // extract
    auto* ext = app.add_subcommand("extract", "Extract the unsmoothed surface net to an .snet cache");
    std::string ext_in, ext_out, ext_labels = "all", ext_engine = "fast";
    bool ext_no_trim = false;
    ext->add_option("volume", ext_in, "Volume header")->required();
    ext->add_option("--labels", ext_labels, "all | v1,v2,... | v1-v2")->capture_default_str();
    ext->add_option("--engine", ext_engine, "fast|oracle")->capture_default_str();
    ext->add_flag("--no-trim", ext_no_trim, "Disable edge trimming");
    ext->add_option("--threads", threads, "Worker thread cap (0 = all cores)");
    ext->add_option("--out", ext_out, "Output .snet")->required();

    // smooth
    auto* smo = app.add_subcommand("smooth", "Smooth a cached .snet surface net");
    std::string smo_in, smo_out, smo_mode = "sphere";
    SmoothingParams smo_params;
    smo->add_option("input", smo_in, "Input .snet")->required();
    add_smoothing_flags(smo, smo_params, smo_mode);
    smo->add_option("--threads", threads, "Worker thread cap (0 = all cores)");
    smo->add_option("--out", smo_out, "Output .snet")->required();

    // triangulate
    auto* tri = app.add_subcommand("triangulate", "Triangulate an .snet and export PLY or OBJ");
    std::string tri_in, tri_out, tri_strategy = "shortest_diagonal";
    tri->add_option("input", tri_in, "Input .snet")->required();
    tri->add_option("--strategy", tri_strategy, "fixed|shortest_diagonal|min_area|most_coplanar")->capture_default_str();
    tri->add_option("--threads", threads, "Worker thread cap (0 = all cores)");
    tri->add_option("--out", tri_out, "Output .ply or .obj")->required();

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "Extract, smooth and triangulate in one run");
    std::string pipe_in, pipe_out, pipe_labels = "all", pipe_mode = "sphere", pipe_strategy = "shortest_diagonal";
    SmoothingParams pipe_params;
    pipe->add_option("volume", pipe_in, "Volume header")->required();
    pipe->add_option("--labels", pipe_labels, "all | v1,v2,... | v1-v2")->capture_default_str();
    add_smoothing_flags(pipe, pipe_params, pipe_mode);
    pipe->add_option("--strategy", pipe_strategy, "Triangulation strategy")->capture_default_str();
    pipe->add_option("--threads", threads, "Worker thread cap (0 = all cores)");
    pipe->add_option("--out", pipe_out, "Output .ply or .obj")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "Time every stage over several thread counts");
    std::string bench_in, bench_out, bench_labels = "all", bench_threads = "1", bench_mode = "sphere",
                bench_strategy = "shortest_diagonal";
    BenchOptions bench_opts;
    bench->add_option("volume", bench_in, "Volume header")->required();
    bench->add_option("--labels", bench_labels, "all | v1,v2,... | v1-v2")->capture_default_str();
    bench->add_option("--threads", bench_threads, "Comma-separated thread counts")->capture_default_str();
    bench->add_option("--repeat", bench_opts.repeat, "Timed runs per thread count")->capture_default_str();
    add_smoothing_flags(bench, bench_opts.smoothing, bench_mode);
    bench->add_option("--strategy", bench_strategy, "Triangulation strategy")->capture_default_str();
    bench->add_option("--out", bench_out, "CSV output (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*gen) {
            const auto r = split(gen_radius, ':');
            if (r.size() != 2) throw UsageError("--radius expects min:max");
            sphere_spec.radius_min = parse_number<double>(r[0], "radius");
            sphere_spec.radius_max = parse_number<double>(r[1], "radius");
            LabeledVolume vol;
            try {
                vol = gen_spheres(parse_dims(gen_dims), parse_spacing(gen_spacing), sphere_spec,
                                  parse_scalar_type(gen_dtype));
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            save_volume(vol, gen_out);
            std::cout << "wrote " << gen_out << '\n';
        } else if (*info) {
            const LabeledVolume vol = load_volume(info_in);
            const auto& d = vol.dims();
            const auto& s = vol.spacing();
            const auto& o = vol.origin();
            std::cout << "volume dims=" << d[0] << 'x' << d[1] << 'x' << d[2] << " spacing=" << s[0] << ',' << s[1]
                      << ',' << s[2] << " origin=" << o[0] << ',' << o[1] << ',' << o[2]
                      << " dtype=" << scalar_type_name(vol.type()) << '\n';
            for (const auto& [value, count] : label_histogram(vol)) {
                std::cout << "label " << value << ' ' << count << '\n';
            }
        } else if (*ext) {
            const LabeledVolume vol = load_volume(ext_in);
            const auto set = select_labels(ext_labels, vol);
            SurfaceNetMesh mesh = empty_mesh_for(vol);
            if (set) {
                if (ext_engine == "oracle") {
                    mesh = oracle_extract(vol, *set);
                } else if (ext_engine == "fast") {
                    ExtractOptions eo;
                    eo.threads = threads;
                    eo.trim = !ext_no_trim;
                    mesh = extract(vol, *set, eo);
                } else {
                    throw UsageError("--engine must be fast or oracle");
                }
            }
            warn_if_empty(mesh);
            write_snet(mesh, ext_out);
            print_totals(mesh.num_points(), mesh.num_quads(), 2 * mesh.num_quads());
            std::cout << "wrote " << ext_out << '\n';
        } else if (*smo) {
            try {
                smo_params.constraint = parse_constraint_mode(smo_mode);
                smo_params.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            const SurfaceNetMesh mesh = smooth(read_snet(smo_in), smo_params, threads);
            write_snet(mesh, smo_out);
            print_totals(mesh.num_points(), mesh.num_quads(), 2 * mesh.num_quads());
            std::cout << "wrote " << smo_out << '\n';
        } else if (*tri) {
            TriangulationStrategy strategy;
            try {
                strategy = parse_triangulation_strategy(tri_strategy);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            const SurfaceNetMesh mesh = read_snet(tri_in);
            const TriangleMesh out = triangulate(mesh, strategy, threads);
            write_triangle_mesh(out, tri_out);
            print_totals(mesh.num_points(), mesh.num_quads(), out.triangles.size());
            std::cout << "wrote " << tri_out << '\n';
        } else if (*pipe) {
            PipelineOptions po;
            try {
                pipe_params.constraint = parse_constraint_mode(pipe_mode);
                pipe_params.validate();
                po.strategy = parse_triangulation_strategy(pipe_strategy);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            po.threads = threads;
            po.smoothing = pipe_params;
            const LabeledVolume vol = load_volume(pipe_in);
            const auto set = select_labels(pipe_labels, vol);
            PipelineResult result;
            if (set) {
                result = run_pipeline(vol, *set, po);
            } else {
                result.net = empty_mesh_for(vol);
            }
            warn_if_empty(result.net);
            write_triangle_mesh(result.triangles, pipe_out);
            print_totals(result.net.num_points(), result.net.num_quads(), result.triangles.triangles.size());
            const auto& t = result.times;
            std::cout << "timing pass1=" << t.pass[0] << " pass2=" << t.pass[1] << " pass3=" << t.pass[2]
                      << " pass4=" << t.pass[3] << " smooth=" << t.smooth << " triangulate=" << t.triangulate << '\n';
            std::cout << "wrote " << pipe_out << '\n';
        } else if (*bench) {
            bench_opts.threads.clear();
            for (const auto& t : split(bench_threads, ',')) bench_opts.threads.push_back(parse_number<int>(t, "thread count"));
            try {
                bench_opts.smoothing.constraint = parse_constraint_mode(bench_mode);
                bench_opts.smoothing.validate();
                bench_opts.strategy = parse_triangulation_strategy(bench_strategy);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            const LabeledVolume vol = load_volume(bench_in);
            const auto set = select_labels(bench_labels, vol);
            if (!set) throw UsageError("bench needs a non-empty label selection");
            BenchReport report;
            try {
                report = run_bench(vol, *set, bench_opts);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            if (bench_out.empty()) {
                write_bench_csv(report, std::cout);
            } else {
                std::ofstream os(bench_out);
                if (!os) throw Error("cannot write " + bench_out);
                write_bench_csv(report, os);
                std::cout << "wrote " << bench_out << '\n';
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
