/* C API for the thresholding tree-search library.
 *
 * Conventions:
 *   - Every function returns a tmcts_status; TMCTS_OK is 0.
 *   - Out-parameters are written only on TMCTS_OK.
 *   - Strings returned through char** are owned by the caller and must be
 *     released with tmcts_string_free().
 *   - tmcts_last_error() describes the most recent failure on this thread.
 *   - Trees are opaque handles; node ids are dense integers in document
 *     order, leaf indices follow depth-first document order.
 *   - Structured inputs and outputs are JSON strings: means/counts documents
 *     map leaf names to numbers, option objects are described per function.
 */
#ifndef TMCTS_H
#define TMCTS_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tmcts_status {
    TMCTS_OK = 0,
    TMCTS_ERR_PARSE = 1,       /* malformed input text */
    TMCTS_ERR_MALFORMED = 2,   /* structurally invalid tree */
    TMCTS_ERR_DOMAIN = 3,      /* argument outside the admissible set */
    TMCTS_ERR_ASSUMPTION = 4,  /* instance violates a standing assumption */
    TMCTS_ERR_IO = 5,          /* file could not be read or written */
    TMCTS_ERR_INVALID = 6,     /* bad handle or argument */
    TMCTS_ERR_INTERNAL = 7
} tmcts_status;

typedef struct tmcts_tree tmcts_tree;

const char* tmcts_version(void);

/* Thread-local message for the last failure; never NULL. */
const char* tmcts_last_error(void);

void tmcts_string_free(char* s);

/* ---- trees ---------------------------------------------------------- */

/* Parses {"root": {"label":"MAX","children":[...]}} with {"leaf":"name"}
 * leaves. The handle must be released with tmcts_tree_free. */
tmcts_status tmcts_tree_parse(const char* json_text, tmcts_tree** out_tree);
void tmcts_tree_free(tmcts_tree* tree);
tmcts_status tmcts_tree_serialize(const tmcts_tree* tree, char** out_json);
tmcts_status tmcts_tree_validate(const tmcts_tree* tree);

int tmcts_tree_num_nodes(const tmcts_tree* tree);
int tmcts_tree_num_leaves(const tmcts_tree* tree);
int tmcts_tree_depth(const tmcts_tree* tree);
int tmcts_tree_root(const tmcts_tree* tree);

/* Minimax value / answer of a node under a means document. `answer` is 1
 * for win (value >= theta), 0 for lose. */
tmcts_status tmcts_tree_value(const tmcts_tree* tree, int node_id, const char* means_json, double* out_value);
tmcts_status tmcts_tree_answer(const tmcts_tree* tree, int node_id, const char* means_json, double theta,
                               int* out_answer);
/* JSON array of node ids of the children of node_id whose value reaches theta. */
tmcts_status tmcts_good_children(const tmcts_tree* tree, int node_id, const char* means_json, double theta,
                                 char** out_json);

/* ---- analysis ------------------------------------------------------- */

/* options: {"theta":0.5,"family":"bernoulli"|"gaussian","sigma2":1.0}
 * result: {"answer":"win","d_root":..,"t_star_per_log":..,
 *          "d":{node id -> value},"w":{leaf name -> weight}} */
tmcts_status tmcts_alloc_json(const tmcts_tree* tree, const char* means_json, const char* options_json,
                              char** out_json);

/* options additionally take "delta". result:
 * {"Z":..,"beta":..,"stop":true|false,"answer":"win"|"lose"} */
tmcts_status tmcts_glr_json(const tmcts_tree* tree, const char* means_json, const char* counts_json,
                            const char* options_json, char** out_json);

/* options: theta/family/sigma2/delta plus
 *   "sampler": "rd"|"d"|"c"|"rr"|"ugape"|"lucb", "seed": integer,
 *   "engine": "naive"|"fast", "round_cap", "refresh_interval", "paranoid".
 * result: one trial record object (tau, answer, correct, counts, ...). */
tmcts_status tmcts_run_json(const tmcts_tree* tree, const char* means_json, const char* options_json,
                            char** out_json);

/* Good-action run; options as for run (sampler fixed to the ratio rule).
 * result includes "gai_child" (leaf child node id or -1) and "gai_name". */
tmcts_status tmcts_gai_json(const tmcts_tree* tree, const char* means_json, const char* options_json,
                            char** out_json);

/* options: {"depth":2,"arity":3,"family":..,"sigma2":..,"theta":..,"seed":1}
 * result: {"tree": <tree doc>, "means": <means doc>} */
tmcts_status tmcts_gen_json(const char* options_json, char** out_json);

/* Runs a full experiment config (JSON mirroring the config file format) and
 * writes JSON-lines trial records to out_path. */
tmcts_status tmcts_experiment(const char* config_json, const char* out_path);

/* Reads JSON-lines records and returns the CSV summary; optionally writes
 * plot data and a gnuplot script when the paths are non-NULL. */
tmcts_status tmcts_report(const char* records_path, const char* plotdata_path, const char* gnuplot_path,
                          char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* TMCTS_H */
