import java.util.HashSet;
import java.util.Set;

class ExampleImpl implements ExampleAPI {
    private Set<String> idSet;

    public ExampleImpl() {
        idSet = new HashSet<>();
    }

    public void add(String id) {
        idSet.add(id);
    }

    public void removeId(String idMain, String idOpt) {
        idSet.remove(idMain);
        if (idMain != idOpt) {
            idSet.remove(idOpt);
        } else {
        }
    }
}
